#pragma once

// CSV ingestion and emission of object series. Numbers are written with 17
// significant digits, so a written file re-reads to identical doubles.

#include <charconv>
#include <cmath>
#include <cstddef>
#include <fstream>
#include <istream>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <string_view>
#include <system_error>
#include <vector>

#include "metricnoise/error.hpp"
#include "metricnoise/objects.hpp"

namespace metricnoise {

inline std::string format_double(double x) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, x, std::chars_format::general, 17);
  return std::string(buf, res.ptr);
}

inline std::optional<double> parse_double(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  if (!s.empty() && s.front() == '+') s.remove_prefix(1);
  if (s.empty()) return std::nullopt;
  double v = 0.0;
  const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (res.ec != std::errc() || res.ptr != s.data() + s.size()) return std::nullopt;
  return v;
}

/// Rectangular table of finite reals. Blank lines are skipped; errors name
/// the 1-based row and column of the file.
inline std::vector<std::vector<double>> read_numeric_csv(std::istream& in,
                                                         const std::string& source = "input") {
  std::vector<std::vector<double>> rows;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    std::vector<double> row;
    std::size_t col = 0, start = 0;
    while (true) {
      ++col;
      const std::size_t comma = line.find(',', start);
      const std::string_view cell =
          std::string_view(line).substr(start, comma == std::string::npos ? std::string::npos
                                                                           : comma - start);
      const auto v = parse_double(cell);
      if (!v || !std::isfinite(*v)) {
        throw InvalidArgument(source + ": row " + std::to_string(line_no) + ", column " +
                              std::to_string(col) + ": not a finite number: '" +
                              std::string(cell) + "'");
      }
      row.push_back(*v);
      if (comma == std::string::npos) break;
      start = comma + 1;
    }
    if (!rows.empty() && row.size() != rows.front().size()) {
      throw InvalidArgument(source + ": row " + std::to_string(line_no) + ": expected " +
                            std::to_string(rows.front().size()) + " columns, found " +
                            std::to_string(row.size()));
    }
    rows.push_back(std::move(row));
  }
  if (rows.empty()) throw InvalidArgument(source + ": no data rows");
  return rows;
}

inline std::vector<std::vector<double>> read_numeric_csv_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InvalidArgument("cannot open '" + path + "'");
  return read_numeric_csv(in, path);
}

enum class Representation { Quantile, Cdf, Density };

inline std::string_view to_string(Representation r) {
  switch (r) {
    case Representation::Quantile: return "quantile";
    case Representation::Cdf: return "cdf";
    case Representation::Density: return "density";
  }
  return "?";
}

inline Representation representation_from_string(std::string_view s) {
  const std::string l = detail::lower(s);
  if (l == "quantile") return Representation::Quantile;
  if (l == "cdf") return Representation::Cdf;
  if (l == "density") return Representation::Density;
  throw InvalidArgument("unknown representation '" + std::string(s) + "'");
}

/// How to interpret the columns of an input file.
struct InputLayout {
  ObjectKind kind = ObjectKind::Vector;
  std::optional<std::size_t> spd_dim;  // inferred from the column count when absent
  Representation representation = Representation::Quantile;
};

/// Converts parsed rows to a series; object validation errors name the
/// offending data row (1-based, counting the grid row where present).
inline ObjectSeries series_from_rows(const std::vector<std::vector<double>>& rows,
                                     const InputLayout& layout,
                                     const std::string& source = "input") {
  auto row_error = [&](std::size_t row, const std::string& what) {
    return InvalidArgument(source + ": row " + std::to_string(row) + ": " + what);
  };
  switch (layout.kind) {
    case ObjectKind::Vector: {
      std::vector<VectorObject> out;
      for (const auto& r : rows) out.push_back(VectorObject{r});
      return out;
    }
    case ObjectKind::Spd: {
      const std::size_t cols = rows.front().size();
      std::size_t p = layout.spd_dim.value_or(
          static_cast<std::size_t>(std::llround(std::sqrt(static_cast<double>(cols)))));
      if (p * p != cols) {
        throw InvalidArgument(source + ": " + std::to_string(cols) +
                              " columns do not form a p x p matrix" +
                              (layout.spd_dim ? " with p = " + std::to_string(p) : ""));
      }
      std::vector<SpdObject> out;
      const auto pp = static_cast<Eigen::Index>(p);
      for (std::size_t i = 0; i < rows.size(); ++i) {
        Matrix m(pp, pp);
        for (Eigen::Index a = 0; a < pp; ++a)
          for (Eigen::Index b = 0; b < pp; ++b)
            m(a, b) = rows[i][static_cast<std::size_t>(a * pp + b)];
        SpdObject obj{std::move(m)};
        try {
          validate(obj);
        } catch (const Error& e) {
          throw row_error(i + 1, e.what());
        }
        out.push_back(std::move(obj));
      }
      return out;
    }
    case ObjectKind::Curve:
    case ObjectKind::Distribution: {
      if (rows.size() < 2) throw InvalidArgument(source + ": needs a grid row and data rows");
      const std::vector<double>& grid = rows.front();
      if (layout.kind == ObjectKind::Curve) {
        std::vector<CurveObject> out;
        for (std::size_t i = 1; i < rows.size(); ++i) {
          CurveObject c{grid, rows[i]};
          try {
            validate(c);
          } catch (const Error& e) {
            throw row_error(i + 1, e.what());
          }
          out.push_back(std::move(c));
        }
        return out;
      }
      std::vector<DistributionObject> out;
      for (std::size_t i = 1; i < rows.size(); ++i) {
        DistributionObject d{grid, std::nullopt, std::nullopt, std::nullopt};
        switch (layout.representation) {
          case Representation::Quantile: d.quantile = rows[i]; break;
          case Representation::Cdf: d.cdf = rows[i]; break;
          case Representation::Density: d.density = rows[i]; break;
        }
        try {
          validate(d);
        } catch (const Error& e) {
          throw row_error(i + 1, e.what());
        }
        out.push_back(std::move(d));
      }
      return out;
    }
  }
  throw InvalidArgument("unknown object kind");
}

inline ObjectSeries read_series(const std::string& path, const InputLayout& layout) {
  return series_from_rows(read_numeric_csv_file(path), layout, path);
}

namespace detail {
inline void write_row(std::ostream& out, const double* v, std::size_t count) {
  for (std::size_t i = 0; i < count; ++i) {
    if (i) out << ',';
    out << format_double(v[i]);
  }
  out << '\n';
}
inline void write_row(std::ostream& out, const std::vector<double>& v) {
  write_row(out, v.data(), v.size());
}
}  // namespace detail

/// Writes a series in the input format. Distributions are written in the
/// requested representation, which must be present on every object.
inline void write_series(std::ostream& out, const ObjectSeries& series,
                         Representation representation = Representation::Quantile) {
  std::visit(
      [&](const auto& objs) {
        using T = typename std::decay_t<decltype(objs)>::value_type;
        if constexpr (std::is_same_v<T, VectorObject>) {
          for (const auto& o : objs) detail::write_row(out, o.values);
        } else if constexpr (std::is_same_v<T, SpdObject>) {
          for (const auto& o : objs) {
            const Matrix rm = o.matrix.transpose();  // column-major storage of the transpose
            detail::write_row(out, rm.data(), static_cast<std::size_t>(rm.size()));
          }
        } else if constexpr (std::is_same_v<T, CurveObject>) {
          if (objs.empty()) return;
          detail::write_row(out, objs.front().grid);
          for (const auto& o : objs) detail::write_row(out, o.values);
        } else {
          if (objs.empty()) return;
          detail::write_row(out, objs.front().grid);
          for (const auto& o : objs) {
            const std::optional<std::vector<double>>* rep = nullptr;
            switch (representation) {
              case Representation::Quantile: rep = &o.quantile; break;
              case Representation::Cdf: rep = &o.cdf; break;
              case Representation::Density: rep = &o.density; break;
            }
            if (!rep->has_value()) {
              throw InvalidArgument("distribution lacks the " +
                                    std::string(to_string(representation)) + " representation");
            }
            detail::write_row(out, **rep);
          }
        }
      },
      series);
}

}  // namespace metricnoise
