#include "ergoscope/ehem.hpp"

#include "ergoscope/random.hpp"

#include <cmath>
#include <numbers>
#include <string>

namespace ergoscope {

namespace {

void require_interval(const Interval& iv, const char* name) {
    if (!std::isfinite(iv.lower) || !std::isfinite(iv.upper) || iv.lower > iv.upper) {
        throw InvalidInput(std::string("EHEM ") + name + " range is invalid");
    }
}

Vec3 hand_point(const EhemModel& m, const EhemCoordinates& u) {
    const double cp = std::cos(u.pitch), sp = std::sin(u.pitch);
    const double cr = std::cos(u.roll), sr = std::sin(u.roll);
    const Vec3 forearm = m.forearm_length * Vec3(cp * cr, cp * sr, sp);
    return m.fulcrum + Vec3(u.reach, u.slide, 0.0) + forearm + u.wrist_offset;
}

struct Ranges {
    Interval slide, reach, pitch, roll;
    double wrist;
};

// Coordinates from the uniform deviates of stream (seed, index). The wrist
// offset is uniform in the ball of radius `wrist`.
EhemCoordinates draw(CounterStream& s, const Ranges& r) {
    EhemCoordinates u;
    u.slide = std::min(s.uniform(r.slide.lower, r.slide.upper), r.slide.upper);
    u.reach = std::min(s.uniform(r.reach.lower, r.reach.upper), r.reach.upper);
    u.pitch = std::min(s.uniform(r.pitch.lower, r.pitch.upper), r.pitch.upper);
    u.roll = std::min(s.uniform(r.roll.lower, r.roll.upper), r.roll.upper);
    const double cos_polar = 2.0 * s.uniform() - 1.0;
    const double azimuth = 2.0 * std::numbers::pi * s.uniform();
    const double radius = r.wrist * std::cbrt(s.uniform());
    const double sin_polar = std::sqrt(std::max(0.0, 1.0 - cos_polar * cos_polar));
    u.wrist_offset = radius * Vec3(sin_polar * std::cos(azimuth), sin_polar * std::sin(azimuth), cos_polar);
    return u;
}

bool within(const EhemModel& m, const EhemCoordinates& u) {
    return m.desk_slide_range.contains(u.slide) && m.reach_range.contains(u.reach) &&
           m.pitch_range.contains(u.pitch) && m.roll_range.contains(u.roll) &&
           u.wrist_offset.norm() <= m.wrist_radius;
}

}  // namespace

void EhemModel::validate() const {
    if (!fulcrum.allFinite()) throw InvalidInput("EHEM fulcrum must be finite");
    require_interval(desk_slide_range, "desk_slide");
    require_interval(reach_range, "reach");
    require_interval(pitch_range, "pitch");
    require_interval(roll_range, "roll");
    if (!(forearm_length > 0.0)) throw InvalidInput("EHEM forearm_length must be positive");
    if (!(wrist_radius >= 0.0)) throw InvalidInput("EHEM wrist_radius must be nonnegative");
}

std::pair<Vec3, Vec3> EhemModel::bounding_box() const {
    const double reach_out = forearm_length + wrist_radius;
    const Vec3 lo = fulcrum + Vec3(reach_range.lower - reach_out, desk_slide_range.lower - reach_out,
                                   -reach_out);
    const Vec3 hi = fulcrum + Vec3(reach_range.upper + reach_out, desk_slide_range.upper + reach_out,
                                   reach_out);
    return {lo, hi};
}

Vec3 ehem_hand_position(const EhemModel& model, const EhemCoordinates& u) {
    if (!within(model, u)) throw InvalidInput("EHEM coordinates outside the model ranges");
    return hand_point(model, u);
}

EhemField sample_ehem(const EhemModel& model, std::size_t n_samples, std::uint64_t seed,
                      const VoxelGrid& grid_template, const Execution& exec,
                      const std::optional<EhemModel>& envelope) {
    model.validate();
    if (n_samples == 0) throw InvalidInput("EHEM n_samples must be at least 1");
    const EhemModel& source = envelope ? *envelope : model;
    if (envelope) {
        envelope->validate();
        auto covers = [](const Interval& outer, const Interval& inner) {
            return outer.lower <= inner.lower && outer.upper >= inner.upper;
        };
        if (!covers(envelope->desk_slide_range, model.desk_slide_range) ||
            !covers(envelope->reach_range, model.reach_range) ||
            !covers(envelope->pitch_range, model.pitch_range) ||
            !covers(envelope->roll_range, model.roll_range) ||
            envelope->wrist_radius < model.wrist_radius) {
            throw InvalidInput("EHEM sampling envelope must contain the model ranges");
        }
    }
    const Ranges ranges{source.desk_slide_range, source.reach_range, source.pitch_range,
                        source.roll_range, source.wrist_radius};

    // Each sample resolves to a flat voxel index, or a sentinel when
    // rejected (-1) or out of bounds (-2); the OR-reduction below is
    // order independent.
    std::vector<long long> hit(n_samples);
    parallel_for(n_samples, exec, [&](std::size_t begin, std::size_t end) {
        for (std::size_t i = begin; i < end; ++i) {
            CounterStream stream(seed, StreamId::EhemSamples, i);
            const EhemCoordinates u = draw(stream, ranges);
            if (envelope && !within(model, u)) {
                hit[i] = -1;
                continue;
            }
            const Index3 idx = grid_template.nearest_index(hand_point(model, u));
            hit[i] = grid_template.contains(idx[0], idx[1], idx[2])
                         ? static_cast<long long>(grid_template.flat(idx[0], idx[1], idx[2]))
                         : -2;
        }
    });

    EhemField field{VoxelGrid(grid_template.origin(), grid_template.resolution(), grid_template.dims())};
    for (long long h : hit) {
        if (h >= 0) {
            field.grid.values()[static_cast<std::size_t>(h)] = kErgonomicIndex;
            ++field.samples_in_bounds;
        } else if (h == -2) {
            ++field.samples_discarded;
        }
    }
    return field;
}

EhemModel mirror_ehem(const EhemModel& model, double plane_y) {
    EhemModel out = model;
    out.fulcrum.y() = 2.0 * plane_y - model.fulcrum.y();
    out.desk_slide_range = {-model.desk_slide_range.upper, -model.desk_slide_range.lower};
    out.roll_range = {-model.roll_range.upper, -model.roll_range.lower};
    return out;
}

}  // namespace ergoscope
