#pragma once

#include "ergoscope/common.hpp"
#include "ergoscope/random.hpp"

#include <array>
#include <span>

namespace ergoscope {

inline constexpr std::size_t kJointCount = 6;

/**
 * Which Denavit-Hartenberg convention a link table is written in.
 *
 * Standard (distal):   T_j = RotZ(theta_j) * TransZ(d_j) * TransX(a_j) * RotX(alpha_j)
 * Modified (proximal): T_j = RotX(alpha_j) * TransX(a_j) * RotZ(theta_j) * TransZ(d_j)
 *
 * In the modified form the (alpha, a) pair stored on link j describes the
 * geometry between joint j-1 and joint j, and joint j rotates about z_j.
 */
enum class DhConvention { Standard, Modified };

/// One revolute link. Angles in radians, lengths in meters.
struct DhLink {
    double alpha = 0.0;
    double a = 0.0;
    double d = 0.0;
    double theta_offset = 0.0;
    double theta_down = 0.0;
    double theta_up = 0.0;

    double range() const { return theta_up - theta_down; }
    bool operator==(const DhLink&) const = default;
};

struct Pose {
    Vec3 position = Vec3::Zero();
    Mat3 orientation = Mat3::Identity();

    Mat4 matrix() const;
    static Pose from_matrix(const Mat4& m);
    bool operator==(const Pose& other) const {
        return position == other.position && orientation == other.orientation;
    }
};

using JointVector = std::array<double, kJointCount>;

/// Six-joint revolute chain. Construction validates the link table.
class ManipulatorModel {
public:
    ManipulatorModel(std::span<const DhLink> links, DhConvention convention = DhConvention::Modified,
                     Pose base_pose = {});

    const std::array<DhLink, kJointCount>& links() const { return links_; }
    const DhLink& link(std::size_t j) const { return links_.at(j); }
    DhConvention convention() const { return convention_; }
    const Pose& base_pose() const { return base_pose_; }

    /// Copy with link lengths a3, a4 (1-based link numbering) replaced.
    ManipulatorModel with_link_lengths(double a3, double a4) const;

    bool operator==(const ManipulatorModel&) const = default;

private:
    std::array<DhLink, kJointCount> links_{};
    DhConvention convention_ = DhConvention::Modified;
    Pose base_pose_{};
};

/// The optimized master-manipulator table (alpha = 0, pi/2, -pi/2, 0, -pi/2, pi/2;
/// a3, a4 the only nonzero lengths) with the default joint limits:
/// joints 1-4 in [-pi/2, pi/2], joints 5-6 in [-pi, pi].
ManipulatorModel master_manipulator(double a3 = 0.26, double a4 = 0.18,
                                    DhConvention convention = DhConvention::Modified);

/// Homogeneous transform contributed by one link at joint angle theta.
Mat4 link_transform(const DhLink& link, double theta, DhConvention convention);

Pose forward_kinematics(const ManipulatorModel& model, std::span<const double> q);

/// 6x6 geometric Jacobian in the base frame; rows 0-2 linear, 3-5 angular.
Mat6 geometric_jacobian(const ManipulatorModel& model, std::span<const double> q);

/// Uniform draw of every joint inside its limits from a counter stream.
JointVector sample_joint_config(const ManipulatorModel& model, CounterStream& stream);

}  // namespace ergoscope
