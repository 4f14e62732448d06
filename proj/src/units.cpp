#include "gyrofde/units.hpp"

#include <charconv>
#include <cmath>

namespace gyrofde::units {
namespace {

struct UnitInfo {
    Unit unit;
    std::string_view tag;
    Dimension dim;
    double factor;  // value in this unit times factor = canonical value
};

// (deg/h)/sqrt(Hz) is read as the Allan deviation ordinate at tau = 1 s:
// sigma(1 s) = N / sqrt(1 s) = N / sqrt(1/3600 h), so x (deg/h)/sqrt(Hz)
// equals x/60 deg/sqrt(h).
constexpr std::array<UnitInfo, 12> kUnits{{
    {Unit::deg_per_h, "deg_per_h", Dimension::rate, kDegToRad},
    {Unit::rad_per_h, "rad_per_h", Dimension::rate, 1.0},
    {Unit::deg_per_sqrt_h, "deg_per_sqrt_h", Dimension::angle_random_walk, kDegToRad},
    {Unit::rad_per_sqrt_h, "rad_per_sqrt_h", Dimension::angle_random_walk, 1.0},
    {Unit::deg_per_h_per_sqrt_hz, "deg_per_h_per_sqrt_hz", Dimension::angle_random_walk,
     kDegToRad / 60.0},
    {Unit::deg_per_h_3_2, "deg_per_h_3_2", Dimension::rate_random_walk, kDegToRad},
    {Unit::rad_per_h_3_2, "rad_per_h_3_2", Dimension::rate_random_walk, 1.0},
    {Unit::h, "h", Dimension::time, 1.0},
    {Unit::s, "s", Dimension::time, 1.0 / kSecondsPerHour},
    {Unit::km, "km", Dimension::length, 1.0},
    {Unit::nmi, "nmi", Dimension::length, kKmPerNmi},
    {Unit::km_per_h, "km_per_h", Dimension::speed, 1.0},
}};

const UnitInfo& info(Unit u) {
    for (const auto& i : kUnits) {
        if (i.unit == u) return i;
    }
    throw UnitError("unknown unit enumerator");
}

std::string_view dimension_name(Dimension d) {
    switch (d) {
        case Dimension::rate: return "angular rate";
        case Dimension::angle_random_walk: return "angle random walk";
        case Dimension::rate_random_walk: return "rate random walk";
        case Dimension::time: return "time";
        case Dimension::length: return "length";
        case Dimension::speed: return "speed";
    }
    return "?";
}

std::string_view trim(std::string_view s) {
    const auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string_view::npos) return {};
    const auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

}  // namespace

std::string_view tag(Unit u) { return info(u).tag; }

Unit parse_unit(std::string_view t) {
    for (const auto& i : kUnits) {
        if (i.tag == t) return i.unit;
    }
    throw UnitError("unknown unit tag '" + std::string(t) + "'");
}

Dimension dimension(Unit u) { return info(u).dim; }

double to_canonical_factor(Unit u) { return info(u).factor; }

Unit canonical_unit(Dimension d) {
    switch (d) {
        case Dimension::rate: return Unit::rad_per_h;
        case Dimension::angle_random_walk: return Unit::rad_per_sqrt_h;
        case Dimension::rate_random_walk: return Unit::rad_per_h_3_2;
        case Dimension::time: return Unit::h;
        case Dimension::length: return Unit::km;
        case Dimension::speed: return Unit::km_per_h;
    }
    throw UnitError("unknown dimension");
}

Quantity convert(const Quantity& q, Unit target) {
    const auto& from = info(q.unit);
    const auto& to = info(target);
    if (from.dim != to.dim) {
        throw UnitError("cannot convert " + std::string(from.tag) + " (" +
                        std::string(dimension_name(from.dim)) + ") to " + std::string(to.tag) +
                        " (" + std::string(dimension_name(to.dim)) + ")");
    }
    if (from.unit == to.unit) return q;
    return {q.value * from.factor / to.factor, target};
}

double canonical(const Quantity& q) { return q.value * info(q.unit).factor; }

Quantity parse_quantity(std::string_view text) {
    const auto s = trim(text);
    const auto sep = s.find_first_of(" \t");
    if (sep == std::string_view::npos) {
        throw UnitError("expected '<number> <unit>', got '" + std::string(text) + "'");
    }
    const auto num = s.substr(0, sep);
    const auto unit = trim(s.substr(sep));
    double value = 0.0;
    const auto [ptr, ec] = std::from_chars(num.data(), num.data() + num.size(), value);
    if (ec != std::errc{} || ptr != num.data() + num.size() || !std::isfinite(value)) {
        throw UnitError("invalid number '" + std::string(num) + "'");
    }
    return {value, parse_unit(unit)};
}

double parse_canonical(std::string_view text, Dimension expected) {
    const auto q = parse_quantity(text);
    if (dimension(q.unit) != expected) {
        throw UnitError("unit '" + std::string(tag(q.unit)) + "' is a " +
                        std::string(dimension_name(dimension(q.unit))) + ", expected a " +
                        std::string(dimension_name(expected)));
    }
    return canonical(q);
}

}  // namespace gyrofde::units
