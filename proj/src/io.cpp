#include "esqpt/io.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <system_error>

#include <unistd.h>

#include "json.hpp"

namespace esqpt {

std::string_view to_string(Format f) { return f == Format::csv ? "csv" : "json"; }

Format parse_format(std::string_view s) {
  if (s == "csv") return Format::csv;
  if (s == "json") return Format::json;
  throw std::invalid_argument("unknown format '" + std::string(s) + "' (expected csv or json)");
}

std::string format_real(double v) {
  if (!std::isfinite(v)) throw std::invalid_argument("cannot serialize a non-finite value");
  char buf[40];
  const int n = std::snprintf(buf, sizeof buf, "%.17g", v);
  return std::string(buf, static_cast<std::size_t>(n));
}

std::string format_exact(double v) {
  if (!std::isfinite(v)) throw std::invalid_argument("cannot serialize a non-finite value");
  char buf[40];
  const auto r = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, r.ptr);
}

namespace {

std::string json_string(std::string_view s) {
  std::string out = "\"";
  for (char c : s) {
    switch (c) {
      case '"': out += "\\\""; break;
      case '\\': out += "\\\\"; break;
      case '\n': out += "\\n"; break;
      case '\t': out += "\\t"; break;
      default:
        if (static_cast<unsigned char>(c) < 0x20) {
          char buf[8];
          std::snprintf(buf, sizeof buf, "\\u%04x", c);
          out += buf;
        } else {
          out += c;
        }
    }
  }
  return out + "\"";
}

std::string cell_text(const Cell& c, Format f) {
  return std::visit(
      [f](const auto& v) -> std::string {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, std::monostate>)
          return f == Format::json ? "null" : "";
        else if constexpr (std::is_same_v<T, double>)
          return format_real(v);
        else if constexpr (std::is_same_v<T, std::int64_t>)
          return std::to_string(v);
        else
          return f == Format::json ? json_string(v) : v;
      },
      c);
}

void check_csv_text(std::string_view s) {
  if (s.find_first_of(",\n\r") != std::string_view::npos)
    throw std::invalid_argument("CSV field contains a separator: '" + std::string(s) + "'");
}

}  // namespace

std::string render(const Table& t, Format format) {
  for (const auto& row : t.rows)
    if (row.size() != t.columns.size()) throw std::invalid_argument("table row width differs from header");
  std::ostringstream os;
  if (format == Format::csv) {
    for (const auto& [k, v] : t.meta) {
      if (k.find('=') != std::string::npos || v.find('\n') != std::string::npos)
        throw std::invalid_argument("bad metadata entry '" + k + "'");
      os << '#' << k << '=' << v << '\n';
    }
    for (std::size_t j = 0; j < t.columns.size(); ++j) {
      check_csv_text(t.columns[j]);
      os << (j ? "," : "") << t.columns[j];
    }
    os << '\n';
    for (const auto& row : t.rows) {
      for (std::size_t j = 0; j < row.size(); ++j) {
        if (const auto* s = std::get_if<std::string>(&row[j])) check_csv_text(*s);
        os << (j ? "," : "") << cell_text(row[j], format);
      }
      os << '\n';
    }
    return os.str();
  }
  os << "{\n  \"meta\": {";
  for (std::size_t i = 0; i < t.meta.size(); ++i)
    os << (i ? ",\n    " : "\n    ") << json_string(t.meta[i].first) << ": " << json_string(t.meta[i].second);
  os << (t.meta.empty() ? "},\n" : "\n  },\n");
  os << "  \"columns\": [";
  for (std::size_t j = 0; j < t.columns.size(); ++j) os << (j ? ", " : "") << json_string(t.columns[j]);
  os << "],\n  \"rows\": [";
  for (std::size_t i = 0; i < t.rows.size(); ++i) {
    os << (i ? ",\n    [" : "\n    [");
    for (std::size_t j = 0; j < t.rows[i].size(); ++j) os << (j ? ", " : "") << cell_text(t.rows[i][j], format);
    os << ']';
  }
  os << (t.rows.empty() ? "]\n}\n" : "\n  ]\n}\n");
  return os.str();
}

void write_table(const Table& table, const std::string& path, Format format) {
  const std::string text = render(table, format);
  const std::string tmp = path + ".tmp." + std::to_string(::getpid());
  {
    std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
    if (!f) throw std::runtime_error("cannot open '" + path + "' for writing");
    f.write(text.data(), static_cast<std::streamsize>(text.size()));
    f.flush();
    if (!f) {
      std::remove(tmp.c_str());
      throw std::runtime_error("write to '" + path + "' failed");
    }
  }
  if (std::rename(tmp.c_str(), path.c_str()) != 0) {
    const std::error_code ec(errno, std::generic_category());
    std::remove(tmp.c_str());
    throw std::runtime_error("cannot move output into '" + path + "': " + ec.message());
  }
}

Format sniff_format(std::string_view content) {
  const auto p = content.find_first_not_of(" \t\r\n");
  return p != std::string_view::npos && content[p] == '{' ? Format::json : Format::csv;
}

Metadata parse_metadata(std::string_view content) {
  Metadata m;
  if (sniff_format(content) == Format::json) {
    const auto j = nlohmann::ordered_json::parse(content);
    if (!j.contains("meta") || !j["meta"].is_object()) throw std::runtime_error("JSON file has no meta object");
    for (const auto& [k, v] : j["meta"].items()) m.emplace_back(k, v.get<std::string>());
    return m;
  }
  std::size_t pos = 0;
  while (pos < content.size() && content[pos] == '#') {
    auto end = content.find('\n', pos);
    if (end == std::string_view::npos) end = content.size();
    const std::string_view line = content.substr(pos + 1, end - pos - 1);
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) throw std::runtime_error("malformed metadata line '#" + std::string(line) + "'");
    m.emplace_back(std::string(line.substr(0, eq)), std::string(line.substr(eq + 1)));
    pos = end + 1;
  }
  return m;
}

Metadata read_metadata(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot read '" + path + "'");
  std::stringstream ss;
  ss << f.rdbuf();
  return parse_metadata(ss.str());
}

}  // namespace esqpt
