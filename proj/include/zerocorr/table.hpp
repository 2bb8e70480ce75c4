#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <utility>
#include <variant>
#include <vector>

namespace zerocorr {

enum class Provenance { input, analytic, wick, mc, derived };

const char* to_string(Provenance p);

struct Column {
    std::string name;
    Provenance provenance = Provenance::input;
};

using Cell = std::variant<double, std::int64_t, std::string>;

/// Rows of typed cells plus an ordered metadata block. Every mc column must
/// be followed somewhere by a "<name>_se" column.
class ResultTable {
public:
    void add_column(std::string name, Provenance provenance);
    void add_row(std::vector<Cell> row);
    void set_meta(const std::string& key, std::string value);

    const std::vector<Column>& columns() const noexcept { return columns_; }
    const std::vector<std::vector<Cell>>& rows() const noexcept { return rows_; }
    const std::vector<std::pair<std::string, std::string>>& metadata() const noexcept { return meta_; }
    const std::string* meta(const std::string& key) const;

    std::size_t column_index(const std::string& name) const;
    double number(std::size_t row, const std::string& column) const;

    /// Throws InputError when an mc column lacks its std_error partner.
    void validate() const;

    /// Metadata as leading "# key=value" lines, then an RFC-4180 body.
    /// Floats use 17 significant digits.
    void write_csv(std::ostream& os) const;
    /// {"metadata": {...}, "columns": [...], "rows": [{...}, ...]}.
    void write_json(std::ostream& os) const;

private:
    std::vector<Column> columns_;
    std::vector<std::vector<Cell>> rows_;
    std::vector<std::pair<std::string, std::string>> meta_;
};

std::string format_double(double v);
std::string csv_field(const std::string& s);

}  // namespace zerocorr
