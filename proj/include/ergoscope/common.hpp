#pragma once

#include <Eigen/Dense>

#include <stdexcept>
#include <string>

namespace ergoscope {

using Vec3 = Eigen::Vector3d;
using Mat3 = Eigen::Matrix3d;
using Mat4 = Eigen::Matrix4d;
using Mat6 = Eigen::Matrix<double, 6, 6>;
using Vec6 = Eigen::Matrix<double, 6, 1>;

inline constexpr const char* kVersion = "0.1.0";

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Malformed arguments: wrong dimensions, values outside their domain.
class InvalidInput : public Error {
public:
    using Error::Error;
};

/// The design produced no usable dexterous workspace (all-zero dexterity,
/// every sample filtered away, ...).
class DegenerateWorkspace : public Error {
public:
    using Error::Error;
};

/// The ergonomic occupancy is empty, so V_R = 0 and F is undefined.
class DegenerateErgonomicModel : public Error {
public:
    using Error::Error;
};

class NumericalFailure : public Error {
public:
    using Error::Error;
};

/// Configuration problems. `kind` distinguishes parse, schema, unknown-key
/// and invariant violations; `path` names the offending field.
class ConfigError : public Error {
public:
    enum class Kind { Parse, Schema, UnknownKey, Invariant };

    ConfigError(Kind kind, std::string path, const std::string& message)
        : Error(describe(kind, path, message)), kind_(kind), path_(std::move(path)) {}

    Kind kind() const noexcept { return kind_; }
    const std::string& path() const noexcept { return path_; }

private:
    static std::string describe(Kind kind, const std::string& path, const std::string& message) {
        const char* label = "config error";
        switch (kind) {
            case Kind::Parse: label = "config parse error"; break;
            case Kind::Schema: label = "config schema error"; break;
            case Kind::UnknownKey: label = "config unknown key"; break;
            case Kind::Invariant: label = "config invalid value"; break;
        }
        std::string out = label;
        if (!path.empty()) out += " at '" + path + "'";
        return out + ": " + message;
    }

    Kind kind_;
    std::string path_;
};

}  // namespace ergoscope
