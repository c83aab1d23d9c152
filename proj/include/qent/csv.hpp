#pragma once

#include <cstdio>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

namespace qent::csv {

/// Floats are written with 12 significant digits.
inline std::string format_number(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

inline std::string format_number(std::size_t v) { return std::to_string(v); }

/// `#`-prefixed comment lines, a column-name row, then data rows.
class Writer {
 public:
  explicit Writer(std::ostream& out) : out_(out) {}

  Writer& comment(std::string_view text) {
    out_ << "# " << text << '\n';
    return *this;
  }

  Writer& header(const std::vector<std::string>& columns) {
    write_fields(columns);
    return *this;
  }

  template <class... Values>
  Writer& row(const Values&... values) {
    std::vector<std::string> fields{format_number(values)...};
    write_fields(fields);
    return *this;
  }

 private:
  void write_fields(const std::vector<std::string>& fields) {
    for (std::size_t i = 0; i < fields.size(); ++i) {
      if (i) out_ << ',';
      out_ << fields[i];
    }
    out_ << '\n';
  }

  std::ostream& out_;
};

}  // namespace qent::csv
