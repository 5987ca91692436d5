#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <variant>
#include <vector>

namespace confocal {

/// Minimal ordered JSON value with deterministic serialization; doubles are
/// printed with 17 significant digits (report_v1 wire format).
class Json {
  public:
    using Object = std::vector<std::pair<std::string, Json>>;
    using Array = std::vector<Json>;

    Json() : v_(nullptr) {}
    Json(bool b) : v_(b) {}
    Json(int i) : v_(std::int64_t(i)) {}
    Json(std::int64_t i) : v_(i) {}
    Json(std::uint64_t i) : v_(std::int64_t(i)) {}
    Json(double d) : v_(d) {}
    Json(const char* s) : v_(std::string(s)) {}
    Json(std::string s) : v_(std::move(s)) {}

    static Json object() { Json j; j.v_ = Object{}; return j; }
    static Json array() { Json j; j.v_ = Array{}; return j; }

    Json& set(const std::string& key, Json val);
    Json& push(Json val);
    std::string dump() const;

  private:
    std::variant<std::nullptr_t, bool, std::int64_t, double, std::string, Object, Array> v_;
    void write(std::string& out) const;
};

/// Per-experiment result record (report_v1 schema).
struct ExperimentReport {
    std::string experiment;
    std::string version;
    std::uint64_t seed = 0;
    double wall_time = 0.0; // 0 unless timing was requested (byte determinism)
    double tolerance = 0.0;
    double mean = 0.0, stddev = 0.0, max_abs_dev = 0.0;
    bool pass = false;
    Json samples = Json::array();
    Json extra = Json::object(); // experiment-specific summary values

    std::vector<std::string> csv_columns;
    std::vector<std::vector<double>> csv_rows;

    /// Fills mean/stddev/max_abs_dev/pass from a vector of deviations.
    void finish(const std::vector<double>& deviations);

    Json to_json() const;
    std::string to_csv() const;
};

std::string toolkit_version();

} // namespace confocal
