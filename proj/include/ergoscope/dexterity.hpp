#pragma once

#include "ergoscope/common.hpp"
#include "ergoscope/kinematics.hpp"

#include <span>
#include <vector>

namespace ergoscope {

struct DexterityConfig {
    /// Scaling factor of the joint-limit penalty. Must be positive.
    double K = 1e5;

    bool operator==(const DexterityConfig&) const = default;
};

/// sqrt(det(J J^T)) of a 6x6 Jacobian. Round-off negatives of det(J J^T)
/// smaller than 1e-15 in magnitude clamp to zero; larger ones throw
/// NumericalFailure.
double manipulability(const Eigen::Ref<const Eigen::MatrixXd>& jacobian);

/// 1 - exp(-K * prod_j (q_j - down_j)(up_j - q_j) / (up_j - down_j)^2).
/// Zero whenever a joint sits on a limit (including locked joints with
/// down == up). Throws InvalidInput when a joint is outside its limits.
double joint_limit_penalty(std::span<const double> q, const ManipulatorModel& model,
                           const DexterityConfig& cfg);

/// Penalized manipulability ("raw Dex") of configuration q.
double dexterity(const ManipulatorModel& model, std::span<const double> q,
                 const DexterityConfig& cfg);

/// Divides every value by the sequence maximum. Throws InvalidInput on an
/// empty sequence and DegenerateWorkspace when the maximum is not positive.
std::vector<double> normalize_dexterity(std::span<const double> raw);

}  // namespace ergoscope
