#include "confocal/report.hpp"

#include <cmath>
#include <cstdio>

namespace confocal {

std::string toolkit_version() { return "confocal-1.0.0"; }

Json& Json::set(const std::string& key, Json val) {
    auto& obj = std::get<Object>(v_);
    obj.emplace_back(key, std::move(val));
    return *this;
}

Json& Json::push(Json val) {
    auto& arr = std::get<Array>(v_);
    arr.push_back(std::move(val));
    return *this;
}

static void write_escaped(std::string& out, const std::string& s) {
    out += '"';
    for (char c : s) {
        switch (c) {
            case '"': out += "\\\""; break;
            case '\\': out += "\\\\"; break;
            case '\n': out += "\\n"; break;
            case '\t': out += "\\t"; break;
            default: out += c;
        }
    }
    out += '"';
}

static std::string fmt17(double v) {
    if (std::isnan(v)) return "null";
    if (std::isinf(v)) return v > 0 ? "1e999" : "-1e999";
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

void Json::write(std::string& out) const {
    if (std::holds_alternative<std::nullptr_t>(v_)) {
        out += "null";
    } else if (std::holds_alternative<bool>(v_)) {
        out += std::get<bool>(v_) ? "true" : "false";
    } else if (std::holds_alternative<std::int64_t>(v_)) {
        out += std::to_string(std::get<std::int64_t>(v_));
    } else if (std::holds_alternative<double>(v_)) {
        out += fmt17(std::get<double>(v_));
    } else if (std::holds_alternative<std::string>(v_)) {
        write_escaped(out, std::get<std::string>(v_));
    } else if (std::holds_alternative<Object>(v_)) {
        out += '{';
        const auto& obj = std::get<Object>(v_);
        for (std::size_t i = 0; i < obj.size(); ++i) {
            if (i) out += ',';
            write_escaped(out, obj[i].first);
            out += ':';
            obj[i].second.write(out);
        }
        out += '}';
    } else {
        out += '[';
        const auto& arr = std::get<Array>(v_);
        for (std::size_t i = 0; i < arr.size(); ++i) {
            if (i) out += ',';
            arr[i].write(out);
        }
        out += ']';
    }
}

std::string Json::dump() const {
    std::string out;
    write(out);
    return out;
}

void ExperimentReport::finish(const std::vector<double>& deviations) {
    double sum = 0.0, maxd = 0.0;
    for (double d : deviations) {
        sum += d;
        maxd = std::max(maxd, std::abs(d));
    }
    mean = deviations.empty() ? 0.0 : sum / double(deviations.size());
    double var = 0.0;
    for (double d : deviations) var += (d - mean) * (d - mean);
    stddev = deviations.empty() ? 0.0 : std::sqrt(var / double(deviations.size()));
    max_abs_dev = maxd;
    pass = max_abs_dev < tolerance;
}

Json ExperimentReport::to_json() const {
    Json j = Json::object();
    j.set("schema", "report_v1");
    j.set("experiment", experiment);
    Json prov = Json::object();
    prov.set("version", version);
    prov.set("seed", std::int64_t(seed));
    prov.set("wall_time", wall_time);
    j.set("provenance", std::move(prov));
    Json stats = Json::object();
    stats.set("mean", mean);
    stats.set("stddev", stddev);
    stats.set("max_abs_dev", max_abs_dev);
    stats.set("tolerance", tolerance);
    stats.set("pass", pass);
    j.set("statistics", std::move(stats));
    j.set("summary", extra);
    if (samples.dump() == "[]" && !csv_rows.empty()) {
        Json arr = Json::array();
        for (const auto& row : csv_rows) {
            Json rec = Json::object();
            for (std::size_t i = 0; i < csv_columns.size() && i < row.size(); ++i)
                rec.set(csv_columns[i], row[i]);
            arr.push(std::move(rec));
        }
        j.set("samples", std::move(arr));
    } else {
        j.set("samples", samples);
    }
    return j;
}

std::string ExperimentReport::to_csv() const {
    std::string out;
    for (std::size_t i = 0; i < csv_columns.size(); ++i) {
        if (i) out += ',';
        out += csv_columns[i];
    }
    out += '\n';
    for (const auto& row : csv_rows) {
        for (std::size_t i = 0; i < row.size(); ++i) {
            if (i) out += ',';
            out += fmt17(row[i]);
        }
        out += '\n';
    }
    return out;
}

} // namespace confocal
