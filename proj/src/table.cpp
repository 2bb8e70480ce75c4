#include "zerocorr/table.hpp"

#include <cmath>
#include <cstdio>
#include <ostream>

#include <json.hpp>

#include "zerocorr/error.hpp"

namespace zerocorr {

const char* to_string(Provenance p) {
    switch (p) {
        case Provenance::input: return "input";
        case Provenance::analytic: return "analytic";
        case Provenance::wick: return "wick";
        case Provenance::mc: return "mc";
        case Provenance::derived: return "derived";
    }
    return "unknown";
}

void ResultTable::add_column(std::string name, Provenance provenance) {
    for (const Column& c : columns_) {
        if (c.name == name) throw InputError("duplicate column '" + name + "'");
    }
    columns_.push_back({std::move(name), provenance});
}

void ResultTable::add_row(std::vector<Cell> row) {
    if (row.size() != columns_.size()) throw InputError("row width does not match the schema");
    rows_.push_back(std::move(row));
}

void ResultTable::set_meta(const std::string& key, std::string value) {
    for (auto& kv : meta_) {
        if (kv.first == key) {
            kv.second = std::move(value);
            return;
        }
    }
    meta_.emplace_back(key, std::move(value));
}

const std::string* ResultTable::meta(const std::string& key) const {
    for (const auto& kv : meta_) {
        if (kv.first == key) return &kv.second;
    }
    return nullptr;
}

std::size_t ResultTable::column_index(const std::string& name) const {
    for (std::size_t i = 0; i < columns_.size(); ++i) {
        if (columns_[i].name == name) return i;
    }
    throw InputError("no column named '" + name + "'");
}

double ResultTable::number(std::size_t row, const std::string& column) const {
    const Cell& c = rows_.at(row).at(column_index(column));
    if (const auto* d = std::get_if<double>(&c)) return *d;
    if (const auto* i = std::get_if<std::int64_t>(&c)) return static_cast<double>(*i);
    throw InputError("column '" + column + "' is not numeric");
}

void ResultTable::validate() const {
    auto ends_with_se = [](const std::string& s) {
        return s.size() > 3 && s.compare(s.size() - 3, 3, "_se") == 0;
    };
    for (const Column& c : columns_) {
        if (c.provenance != Provenance::mc || ends_with_se(c.name)) continue;
        bool paired = false;
        for (const Column& other : columns_) paired = paired || other.name == c.name + "_se";
        if (!paired) throw InputError("mc column '" + c.name + "' has no std_error column");
    }
}

std::string format_double(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string csv_field(const std::string& s) {
    if (s.find_first_of(",\"\r\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += '"';
        out += c;
    }
    out += '"';
    return out;
}

namespace {

std::string cell_text(const Cell& c) {
    if (const auto* d = std::get_if<double>(&c)) return format_double(*d);
    if (const auto* i = std::get_if<std::int64_t>(&c)) return std::to_string(*i);
    return std::get<std::string>(c);
}

}  // namespace

void ResultTable::write_csv(std::ostream& os) const {
    validate();
    for (const auto& [k, v] : meta_) os << "# " << k << '=' << v << '\n';
    os << "# provenance=";
    for (std::size_t i = 0; i < columns_.size(); ++i) {
        os << (i ? ";" : "") << columns_[i].name << ':' << to_string(columns_[i].provenance);
    }
    os << '\n';
    for (std::size_t i = 0; i < columns_.size(); ++i) os << (i ? "," : "") << csv_field(columns_[i].name);
    os << '\n';
    for (const auto& row : rows_) {
        for (std::size_t i = 0; i < row.size(); ++i) os << (i ? "," : "") << csv_field(cell_text(row[i]));
        os << '\n';
    }
}

void ResultTable::write_json(std::ostream& os) const {
    validate();
    nlohmann::ordered_json doc;
    doc["metadata"] = nlohmann::ordered_json::object();
    for (const auto& [k, v] : meta_) doc["metadata"][k] = v;
    doc["columns"] = nlohmann::ordered_json::array();
    for (const Column& c : columns_) {
        doc["columns"].push_back({{"name", c.name}, {"provenance", to_string(c.provenance)}});
    }
    doc["rows"] = nlohmann::ordered_json::array();
    for (const auto& row : rows_) {
        nlohmann::ordered_json obj = nlohmann::ordered_json::object();
        for (std::size_t i = 0; i < row.size(); ++i) {
            std::visit([&](const auto& v) { obj[columns_[i].name] = v; }, row[i]);
        }
        doc["rows"].push_back(std::move(obj));
    }
    os << doc.dump(2) << '\n';
}

}  // namespace zerocorr
