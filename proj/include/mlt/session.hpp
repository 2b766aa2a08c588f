#ifndef MLT_SESSION_HPP
#define MLT_SESSION_HPP

#include <Eigen/Dense>

#include <cstddef>
#include <memory>
#include <optional>
#include <string>
#include <variant>
#include <vector>

namespace mlt {

enum class AttributeKind { continuous, ordinal };

/// One non-functional property of a service (speed, security level, ...).
/// Every attribute is higher-is-better.
struct AttributeSpec {
    std::string name;
    AttributeKind kind = AttributeKind::continuous;
    std::string unit;
    std::vector<std::string> ordinal_levels;  // lowest first; ordinal only
    int ordinal_base = 1;                      // numeric value of the lowest level
    bool higher_is_better = true;

    bool operator==(const AttributeSpec&) const = default;

    /// Numeric value of the top ordinal level.
    double ordinal_max() const { return ordinal_base + static_cast<double>(ordinal_levels.size()) - 1.0; }
};

/// Ordered attribute list shared by a promise and every observation of it.
class AttributeSchema {
public:
    /// Throws InvalidArgument on an empty list, duplicate names, fewer than
    /// two ordinal levels, levels on a continuous attribute, a negative
    /// ordinal base, or a lower-is-better attribute.
    explicit AttributeSchema(std::vector<AttributeSpec> attributes);

    std::size_t size() const noexcept { return attributes_.size(); }
    const AttributeSpec& operator[](std::size_t i) const { return attributes_[i]; }
    const std::vector<AttributeSpec>& attributes() const noexcept { return attributes_; }
    std::optional<std::size_t> index_of(const std::string& name) const;

    /// Numeric value of `label` for ordinal attribute `i` (index + base).
    double level_value(std::size_t i, const std::string& label) const;

    bool operator==(const AttributeSchema&) const = default;

private:
    std::vector<AttributeSpec> attributes_;
};

using SchemaPtr = std::shared_ptr<const AttributeSchema>;

inline SchemaPtr make_schema(std::vector<AttributeSpec> attributes) {
    return std::make_shared<const AttributeSchema>(std::move(attributes));
}

/// Promise or observation values, one per schema attribute. Ordinal entries
/// hold numerized levels.
class PerformanceVector {
public:
    PerformanceVector(SchemaPtr schema, Eigen::VectorXd values);

    const Eigen::VectorXd& values() const noexcept { return values_; }
    const AttributeSchema& schema() const noexcept { return *schema_; }
    const SchemaPtr& schema_ptr() const noexcept { return schema_; }
    std::size_t size() const noexcept { return static_cast<std::size_t>(values_.size()); }
    double operator()(std::size_t i) const { return values_(static_cast<Eigen::Index>(i)); }

    bool shares_schema_with(const PerformanceVector& other) const {
        return schema_ == other.schema_ || *schema_ == *other.schema_;
    }

private:
    SchemaPtr schema_;
    Eigen::VectorXd values_;
};

using RawValue = std::variant<double, std::string>;

/// Converts raw readings into a PerformanceVector: continuous values pass
/// through and ordinal labels map to (level index + ordinal_base).
PerformanceVector numerize(const SchemaPtr& schema, const std::vector<RawValue>& raw);

struct GeoPoint {
    double latitude_deg = 0.0;
    double longitude_deg = 0.0;
};

/// Great-circle distance in meters (haversine, mean Earth radius).
double haversine_distance_m(const GeoPoint& a, const GeoPoint& b);

/// The spatio-temporal scope in which one provider offers one service.
class ServiceSession {
public:
    ServiceSession(std::string id, GeoPoint location, double start_time, double end_time,
                   std::string provider_id, std::string service_type, PerformanceVector promise);

    const std::string& id() const noexcept { return id_; }
    const GeoPoint& location() const noexcept { return location_; }
    double start_time() const noexcept { return start_time_; }
    double end_time() const noexcept { return end_time_; }
    double duration() const noexcept { return end_time_ - start_time_; }
    const std::string& provider_id() const noexcept { return provider_id_; }
    const std::string& service_type() const noexcept { return service_type_; }
    const PerformanceVector& promise() const noexcept { return promise_; }
    const AttributeSchema& schema() const noexcept { return promise_.schema(); }
    const SchemaPtr& schema_ptr() const noexcept { return promise_.schema_ptr(); }

private:
    std::string id_;
    GeoPoint location_;
    double start_time_;
    double end_time_;
    std::string provider_id_;
    std::string service_type_;
    PerformanceVector promise_;
};

/// Reasons a promise cannot serve as the denominator of the trust ratio;
/// empty when every element is strictly positive.
std::vector<std::string> promise_violations(const PerformanceVector& promise);

/// True iff `time` lies in [start, end] and `location` is within `radius_m`.
bool session_contains(const ServiceSession& session, double time, const GeoPoint& location,
                      double radius_m);

}  // namespace mlt

#endif  // MLT_SESSION_HPP
