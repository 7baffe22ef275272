#include "ergoscope/kinematics.hpp"

#include <cmath>
#include <numbers>
#include <string>

namespace ergoscope {

namespace {

void require_joint_count(std::span<const double> q) {
    if (q.size() != kJointCount) {
        throw InvalidInput("joint vector has " + std::to_string(q.size()) + " entries, expected 6");
    }
}

Mat4 rot_z(double angle) {
    Mat4 t = Mat4::Identity();
    const double c = std::cos(angle), s = std::sin(angle);
    t(0, 0) = c;
    t(0, 1) = -s;
    t(1, 0) = s;
    t(1, 1) = c;
    return t;
}

Mat4 rot_x(double angle) {
    Mat4 t = Mat4::Identity();
    const double c = std::cos(angle), s = std::sin(angle);
    t(1, 1) = c;
    t(1, 2) = -s;
    t(2, 1) = s;
    t(2, 2) = c;
    return t;
}

Mat4 trans(double x, double y, double z) {
    Mat4 t = Mat4::Identity();
    t(0, 3) = x;
    t(1, 3) = y;
    t(2, 3) = z;
    return t;
}

// Joint axes and origins in the base frame plus the end-effector transform.
struct ChainFrames {
    std::array<Vec3, kJointCount> axes;
    std::array<Vec3, kJointCount> origins;
    Mat4 end_effector;
};

ChainFrames chain_frames(const ManipulatorModel& model, std::span<const double> q) {
    ChainFrames out;
    Mat4 t = model.base_pose().matrix();
    for (std::size_t j = 0; j < kJointCount; ++j) {
        const DhLink& link = model.links()[j];
        const double theta = q[j] + link.theta_offset;
        if (model.convention() == DhConvention::Standard) {
            // Joint j turns about z of the frame preceding link j.
            out.axes[j] = t.block<3, 1>(0, 2);
            out.origins[j] = t.block<3, 1>(0, 3);
            t = t * link_transform(link, theta, DhConvention::Standard);
        } else {
            // Joint j turns about z of its own frame, placed after (alpha, a).
            t = t * rot_x(link.alpha) * trans(link.a, 0.0, 0.0);
            out.axes[j] = t.block<3, 1>(0, 2);
            out.origins[j] = t.block<3, 1>(0, 3);
            t = t * rot_z(theta) * trans(0.0, 0.0, link.d);
        }
    }
    out.end_effector = t;
    return out;
}

}  // namespace

Mat4 Pose::matrix() const {
    Mat4 m = Mat4::Identity();
    m.block<3, 3>(0, 0) = orientation;
    m.block<3, 1>(0, 3) = position;
    return m;
}

Pose Pose::from_matrix(const Mat4& m) {
    return Pose{m.block<3, 1>(0, 3), m.block<3, 3>(0, 0)};
}

ManipulatorModel::ManipulatorModel(std::span<const DhLink> links, DhConvention convention,
                                   Pose base_pose)
    : convention_(convention), base_pose_(std::move(base_pose)) {
    if (links.size() != kJointCount) {
        throw InvalidInput("manipulator must have exactly 6 links, got " +
                           std::to_string(links.size()));
    }
    for (std::size_t j = 0; j < kJointCount; ++j) {
        const DhLink& l = links[j];
        const std::string name = "link " + std::to_string(j + 1);
        if (!std::isfinite(l.alpha) || !std::isfinite(l.a) || !std::isfinite(l.d) ||
            !std::isfinite(l.theta_offset) || !std::isfinite(l.theta_down) ||
            !std::isfinite(l.theta_up)) {
            throw InvalidInput(name + ": non-finite DH parameter");
        }
        if (l.a < 0.0) throw InvalidInput(name + ": link length a must be >= 0");
        if (l.theta_down > l.theta_up) {
            throw InvalidInput(name + ": theta_down exceeds theta_up");
        }
        links_[j] = l;
    }
    const Mat3& r = base_pose_.orientation;
    if ((r * r.transpose() - Mat3::Identity()).cwiseAbs().maxCoeff() > 1e-9 ||
        std::abs(r.determinant() - 1.0) > 1e-9) {
        throw InvalidInput("base orientation is not a proper rotation");
    }
}

ManipulatorModel ManipulatorModel::with_link_lengths(double a3, double a4) const {
    auto links = links_;
    links[2].a = a3;
    links[3].a = a4;
    return ManipulatorModel(links, convention_, base_pose_);
}

ManipulatorModel master_manipulator(double a3, double a4, DhConvention convention) {
    constexpr double pi = std::numbers::pi;
    const std::array<double, kJointCount> alpha{0.0, pi / 2, -pi / 2, 0.0, -pi / 2, pi / 2};
    std::array<DhLink, kJointCount> links{};
    for (std::size_t j = 0; j < kJointCount; ++j) {
        links[j].alpha = alpha[j];
        const double limit = j < 4 ? pi / 2 : pi;
        links[j].theta_down = -limit;
        links[j].theta_up = limit;
    }
    links[2].a = a3;
    links[3].a = a4;
    return ManipulatorModel(links, convention);
}

Mat4 link_transform(const DhLink& link, double theta, DhConvention convention) {
    if (convention == DhConvention::Standard) {
        return rot_z(theta) * trans(0.0, 0.0, link.d) * trans(link.a, 0.0, 0.0) * rot_x(link.alpha);
    }
    return rot_x(link.alpha) * trans(link.a, 0.0, 0.0) * rot_z(theta) * trans(0.0, 0.0, link.d);
}

Pose forward_kinematics(const ManipulatorModel& model, std::span<const double> q) {
    require_joint_count(q);
    Mat4 t = model.base_pose().matrix();
    for (std::size_t j = 0; j < kJointCount; ++j) {
        const DhLink& link = model.links()[j];
        t = t * link_transform(link, q[j] + link.theta_offset, model.convention());
    }
    return Pose::from_matrix(t);
}

Mat6 geometric_jacobian(const ManipulatorModel& model, std::span<const double> q) {
    require_joint_count(q);
    const ChainFrames frames = chain_frames(model, q);
    const Vec3 p_end = frames.end_effector.block<3, 1>(0, 3);
    Mat6 jac;
    for (std::size_t j = 0; j < kJointCount; ++j) {
        const Vec3& z = frames.axes[j];
        jac.block<3, 1>(0, j) = z.cross(p_end - frames.origins[j]);
        jac.block<3, 1>(3, j) = z;
    }
    return jac;
}

JointVector sample_joint_config(const ManipulatorModel& model, CounterStream& stream) {
    JointVector q{};
    for (std::size_t j = 0; j < kJointCount; ++j) {
        const DhLink& link = model.links()[j];
        // Guard the top end: lo + u*(hi-lo) can round past hi.
        q[j] = std::min(stream.uniform(link.theta_down, link.theta_up), link.theta_up);
    }
    return q;
}

}  // namespace ergoscope
