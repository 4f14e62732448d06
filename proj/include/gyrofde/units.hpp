// Unit tags and conversions for gyro error-budget quantities.
//
// Everything downstream of parsing works in radians, hours and kilometers.
// The tags below are the only units accepted on the command line, in JSON
// configs and in CSV headers.
#pragma once

#include <array>
#include <stdexcept>
#include <string>
#include <string_view>

namespace gyrofde::units {

enum class Unit {
    deg_per_h,
    rad_per_h,
    deg_per_sqrt_h,
    rad_per_sqrt_h,
    deg_per_h_per_sqrt_hz,
    deg_per_h_3_2,
    rad_per_h_3_2,
    h,
    s,
    km,
    nmi,
    km_per_h,
};

enum class Dimension {
    rate,               // angle / time
    angle_random_walk,  // angle / sqrt(time)
    rate_random_walk,   // angle / time^(3/2)
    time,
    length,
    speed,
};

/// Thrown for unknown tags and dimensionally incompatible conversions.
class UnitError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

struct Quantity {
    double value = 0.0;
    Unit unit = Unit::h;
};

inline constexpr double kPi = 3.14159265358979323846;
inline constexpr double kDegToRad = kPi / 180.0;
inline constexpr double kKmPerNmi = 1.852;
inline constexpr double kSecondsPerHour = 3600.0;

std::string_view tag(Unit u);
Unit parse_unit(std::string_view tag);
Dimension dimension(Unit u);

/// Multiplier taking a value in `u` to the canonical unit of its dimension
/// (rad/h, rad/sqrt(h), rad/h^(3/2), h, km, km/h).
double to_canonical_factor(Unit u);

Unit canonical_unit(Dimension d);

Quantity convert(const Quantity& q, Unit target);

/// Shorthand for `convert(q, canonical_unit(dimension(q.unit))).value`.
double canonical(const Quantity& q);

/// Parses "<number> <tag>", e.g. "0.01 deg_per_h_3_2".
Quantity parse_quantity(std::string_view text);

/// Canonical value of `text`, which must carry a unit of dimension `expected`.
double parse_canonical(std::string_view text, Dimension expected);

// Convenience helpers used throughout the tests and tools.
inline double deg_per_sqrt_h(double x) { return x * kDegToRad; }
inline double deg_per_h_3_2(double x) { return x * kDegToRad; }
inline double deg_per_h(double x) { return x * kDegToRad; }
inline double seconds(double x) { return x / kSecondsPerHour; }
inline double nmi(double x) { return x * kKmPerNmi; }

inline double to_deg(double rad) { return rad / kDegToRad; }
inline double to_seconds(double hours) { return hours * kSecondsPerHour; }
inline double to_nmi(double km) { return km / kKmPerNmi; }

}  // namespace gyrofde::units
