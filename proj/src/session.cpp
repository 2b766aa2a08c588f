#include "mlt/session.hpp"

#include "mlt/error.hpp"

#include <cmath>
#include <numbers>
#include <set>

namespace mlt {

namespace {

constexpr double kEarthRadiusM = 6371008.8;

double to_radians(double deg) { return deg * std::numbers::pi / 180.0; }

}  // namespace

AttributeSchema::AttributeSchema(std::vector<AttributeSpec> attributes)
    : attributes_(std::move(attributes)) {
    if (attributes_.empty()) {
        throw InvalidArgument("attribute schema must contain at least one attribute");
    }
    std::set<std::string> seen;
    for (const auto& attr : attributes_) {
        if (attr.name.empty()) {
            throw InvalidArgument("attribute name must not be empty");
        }
        if (!seen.insert(attr.name).second) {
            throw InvalidArgument("duplicate attribute name '" + attr.name + "'");
        }
        if (!attr.higher_is_better) {
            throw InvalidArgument("attribute '" + attr.name +
                                  "' is lower-is-better; only higher-is-better attributes are supported");
        }
        if (attr.kind == AttributeKind::ordinal) {
            if (attr.ordinal_levels.size() < 2) {
                throw InvalidArgument("ordinal attribute '" + attr.name + "' needs at least two levels");
            }
            if (attr.ordinal_base < 0) {
                throw InvalidArgument("ordinal attribute '" + attr.name + "' has a negative base");
            }
            std::set<std::string> labels(attr.ordinal_levels.begin(), attr.ordinal_levels.end());
            if (labels.size() != attr.ordinal_levels.size()) {
                throw InvalidArgument("ordinal attribute '" + attr.name + "' repeats a level label");
            }
        } else if (!attr.ordinal_levels.empty()) {
            throw InvalidArgument("continuous attribute '" + attr.name + "' must not declare levels");
        }
    }
}

std::optional<std::size_t> AttributeSchema::index_of(const std::string& name) const {
    for (std::size_t i = 0; i < attributes_.size(); ++i) {
        if (attributes_[i].name == name) return i;
    }
    return std::nullopt;
}

double AttributeSchema::level_value(std::size_t i, const std::string& label) const {
    const auto& attr = attributes_.at(i);
    if (attr.kind != AttributeKind::ordinal) {
        throw InvalidArgument("attribute '" + attr.name + "' is not ordinal");
    }
    for (std::size_t k = 0; k < attr.ordinal_levels.size(); ++k) {
        if (attr.ordinal_levels[k] == label) {
            return static_cast<double>(k) + attr.ordinal_base;
        }
    }
    throw InvalidArgument("unknown level '" + label + "' for attribute '" + attr.name + "'");
}

PerformanceVector::PerformanceVector(SchemaPtr schema, Eigen::VectorXd values)
    : schema_(std::move(schema)), values_(std::move(values)) {
    if (!schema_) {
        throw InvalidArgument("performance vector requires a schema");
    }
    if (static_cast<std::size_t>(values_.size()) != schema_->size()) {
        throw InvalidArgument("performance vector has " + std::to_string(values_.size()) +
                              " values but the schema has " + std::to_string(schema_->size()) +
                              " attributes");
    }
    for (std::size_t i = 0; i < schema_->size(); ++i) {
        const auto& attr = (*schema_)[i];
        const double v = values_(static_cast<Eigen::Index>(i));
        if (!std::isfinite(v) || v < 0.0) {
            throw InvalidArgument("value for '" + attr.name + "' must be a finite non-negative number");
        }
        if (attr.kind == AttributeKind::ordinal) {
            if (v != std::round(v) || v < attr.ordinal_base || v > attr.ordinal_max()) {
                throw InvalidArgument("value for ordinal '" + attr.name + "' is not a numerized level");
            }
        }
    }
}

PerformanceVector numerize(const SchemaPtr& schema, const std::vector<RawValue>& raw) {
    if (!schema) {
        throw InvalidArgument("numerize requires a schema");
    }
    if (raw.size() != schema->size()) {
        throw InvalidArgument("expected " + std::to_string(schema->size()) + " raw values, got " +
                              std::to_string(raw.size()));
    }
    Eigen::VectorXd values(static_cast<Eigen::Index>(raw.size()));
    for (std::size_t i = 0; i < raw.size(); ++i) {
        const auto& attr = (*schema)[i];
        double v = 0.0;
        if (const auto* label = std::get_if<std::string>(&raw[i])) {
            v = schema->level_value(i, *label);
        } else {
            v = std::get<double>(raw[i]);
            if (attr.kind == AttributeKind::ordinal) {
                throw InvalidArgument("ordinal attribute '" + attr.name + "' expects a level label");
            }
            if (v < 0.0) {
                throw InvalidArgument("negative value for '" + attr.name + "'");
            }
        }
        values(static_cast<Eigen::Index>(i)) = v;
    }
    return PerformanceVector(schema, std::move(values));
}

double haversine_distance_m(const GeoPoint& a, const GeoPoint& b) {
    const double phi1 = to_radians(a.latitude_deg);
    const double phi2 = to_radians(b.latitude_deg);
    const double dphi = phi2 - phi1;
    const double dlambda = to_radians(b.longitude_deg - a.longitude_deg);
    const double h = std::pow(std::sin(dphi / 2), 2) +
                     std::cos(phi1) * std::cos(phi2) * std::pow(std::sin(dlambda / 2), 2);
    return 2.0 * kEarthRadiusM * std::asin(std::min(1.0, std::sqrt(h)));
}

std::vector<std::string> promise_violations(const PerformanceVector& promise) {
    std::vector<std::string> out;
    for (std::size_t i = 0; i < promise.size(); ++i) {
        if (promise(i) <= 0.0) {
            const auto& attr = promise.schema()[i];
            std::string msg = "promise for '" + attr.name +
                              "' is 0, so the observed/promised trust ratio would divide by zero";
            if (attr.kind == AttributeKind::ordinal) {
                msg += " (ordinal base " + std::to_string(attr.ordinal_base) +
                       " maps the lowest level to 0; use ordinal_base >= 1)";
            }
            out.push_back(std::move(msg));
        }
    }
    return out;
}

ServiceSession::ServiceSession(std::string id, GeoPoint location, double start_time,
                               double end_time, std::string provider_id,
                               std::string service_type, PerformanceVector promise)
    : id_(std::move(id)),
      location_(location),
      start_time_(start_time),
      end_time_(end_time),
      provider_id_(std::move(provider_id)),
      service_type_(std::move(service_type)),
      promise_(std::move(promise)) {
    if (id_.empty()) {
        throw InvalidArgument("session id must not be empty");
    }
    if (!(start_time_ < end_time_)) {
        throw InvalidArgument("session start_time must precede end_time");
    }
    if (std::abs(location_.latitude_deg) > 90.0 || std::abs(location_.longitude_deg) > 180.0) {
        throw InvalidArgument("session location is not a valid latitude/longitude");
    }
    if (auto problems = promise_violations(promise_); !problems.empty()) {
        throw InvalidArgument(problems.front());
    }
}

bool session_contains(const ServiceSession& session, double time, const GeoPoint& location,
                      double radius_m) {
    if (!(radius_m > 0.0)) {
        throw InvalidArgument("containment radius must be positive");
    }
    if (time < session.start_time() || time > session.end_time()) return false;
    return haversine_distance_m(session.location(), location) <= radius_m;
}

}  // namespace mlt
