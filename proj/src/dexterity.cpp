#include "ergoscope/dexterity.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace ergoscope {

namespace {
constexpr double kNegativeDeterminantTolerance = 1e-15;
}

double manipulability(const Eigen::Ref<const Eigen::MatrixXd>& jacobian) {
    if (jacobian.rows() != 6 || jacobian.cols() != 6) {
        throw InvalidInput("manipulability expects a 6x6 Jacobian, got " +
                           std::to_string(jacobian.rows()) + "x" + std::to_string(jacobian.cols()));
    }
    const Mat6 jjt = jacobian * jacobian.transpose();
    const double det = jjt.partialPivLu().determinant();
    if (!std::isfinite(det)) throw NumericalFailure("det(J J^T) is not finite");
    if (det < 0.0) {
        if (det > -kNegativeDeterminantTolerance) return 0.0;
        throw NumericalFailure("det(J J^T) = " + std::to_string(det) + " is negative");
    }
    return std::sqrt(det);
}

double joint_limit_penalty(std::span<const double> q, const ManipulatorModel& model,
                           const DexterityConfig& cfg) {
    if (q.size() != kJointCount) throw InvalidInput("joint vector must have 6 entries");
    if (!(cfg.K > 0.0)) throw InvalidInput("penalty scaling factor K must be positive");
    double product = 1.0;
    for (std::size_t j = 0; j < kJointCount; ++j) {
        const DhLink& link = model.links()[j];
        if (q[j] < link.theta_down || q[j] > link.theta_up) {
            throw InvalidInput("joint " + std::to_string(j + 1) + " outside its limits");
        }
        const double range = link.range();
        if (range == 0.0) return 0.0;
        product *= (q[j] - link.theta_down) * (link.theta_up - q[j]) / (range * range);
    }
    return -std::expm1(-cfg.K * product);
}

double dexterity(const ManipulatorModel& model, std::span<const double> q,
                 const DexterityConfig& cfg) {
    const double penalty = joint_limit_penalty(q, model, cfg);
    if (penalty == 0.0) return 0.0;
    return manipulability(geometric_jacobian(model, q)) * penalty;
}

std::vector<double> normalize_dexterity(std::span<const double> raw) {
    if (raw.empty()) throw InvalidInput("cannot normalize an empty dexterity sequence");
    const double peak = *std::max_element(raw.begin(), raw.end());
    if (!(peak > 0.0)) {
        throw DegenerateWorkspace("every sampled configuration has zero dexterity");
    }
    std::vector<double> out(raw.size());
    std::transform(raw.begin(), raw.end(), out.begin(), [peak](double v) { return v / peak; });
    return out;
}

}  // namespace ergoscope
