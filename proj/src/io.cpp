#include "godds/io.hpp"

#include <cerrno>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <vector>

#include "godds/error.hpp"

namespace godds {
namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split(const std::string& line) {
  std::vector<std::string> out;
  std::string cell;
  std::istringstream ss(line);
  while (std::getline(ss, cell, ',')) out.push_back(trim(cell));
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

std::optional<double> parse_number(const std::string& s) {
  if (s.empty()) return std::nullopt;
  errno = 0;
  char* end = nullptr;
  const double v = std::strtod(s.c_str(), &end);
  if (end != s.c_str() + s.size() || errno == ERANGE || !std::isfinite(v)) return std::nullopt;
  return v;
}

int parse_binary(const std::string& s, const char* column, std::size_t row, const std::string& source) {
  const auto v = parse_number(s);
  if (!v || (*v != 0.0 && *v != 1.0)) {
    throw DataError(source + ": row " + std::to_string(row) + ": " + column + " must be 0 or 1, got '" + s + "'");
  }
  return static_cast<int>(*v);
}

void dump(const Json& v, std::string& out, int indent, int depth) {
  const auto newline = [&](int d) {
    if (indent < 0) return;
    out += '\n';
    out.append(static_cast<std::size_t>(indent * d), ' ');
  };
  switch (v.type()) {
    case Json::value_t::object: {
      if (v.empty()) {
        out += "{}";
        return;
      }
      out += '{';
      bool first = true;
      for (auto it = v.begin(); it != v.end(); ++it) {
        if (!first) out += ',';
        first = false;
        newline(depth + 1);
        out += Json(it.key()).dump();
        out += indent < 0 ? ":" : ": ";
        dump(it.value(), out, indent, depth + 1);
      }
      newline(depth);
      out += '}';
      return;
    }
    case Json::value_t::array: {
      if (v.empty()) {
        out += "[]";
        return;
      }
      out += '[';
      bool first = true;
      for (const auto& e : v) {
        if (!first) out += ',';
        first = false;
        newline(depth + 1);
        dump(e, out, indent, depth + 1);
      }
      newline(depth);
      out += ']';
      return;
    }
    case Json::value_t::number_float:
      out += format_double(v.get<double>());
      return;
    default:
      out += v.dump();
  }
}

Real parse_probability(const Json& v, const std::string& what) {
  if (v.is_number()) return static_cast<Real>(v.get<double>());
  if (v.is_string()) {
    const std::string s = v.get<std::string>();
    const auto slash = s.find('/');
    auto whole = [&](const std::string& part) {
      errno = 0;
      char* end = nullptr;
      const long double x = std::strtold(part.c_str(), &end);
      if (part.empty() || end != part.c_str() + part.size() || errno == ERANGE) {
        throw DataError(what + ": cannot parse '" + s + "'");
      }
      return x;
    };
    if (slash == std::string::npos) return whole(trim(s));
    const Real den = whole(trim(s.substr(slash + 1)));
    if (den == 0) throw DataError(what + ": zero denominator in '" + s + "'");
    return whole(trim(s.substr(0, slash))) / den;
  }
  throw DataError(what + " must be a number or an \"a/b\" string");
}

}  // namespace

std::string format_double(double v) {
  if (!std::isfinite(v)) return "null";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  std::string s(buf);
  // Keep integral doubles recognisable as floating point.
  if (s.find_first_of(".eEn") == std::string::npos) s += ".0";
  return s;
}

std::string dump_json(const Json& value, int indent) {
  std::string out;
  dump(value, out, indent, 0);
  return out;
}

void write_dataset_csv(std::ostream& out, const Dataset& data) {
  out << "y,a";
  for (std::size_t j = 0; j < data.dim(); ++j) out << ",x" << (j + 1);
  out << '\n';
  for (std::size_t i = 0; i < data.size(); ++i) {
    out << data.y(i) << ',' << data.a(i);
    for (double v : data.x(i)) out << ',' << format_double(v);
    out << '\n';
  }
  if (!out) throw DataError("failed writing dataset");
}

void write_dataset_csv(const std::filesystem::path& path, const Dataset& data) {
  std::ofstream out(path);
  if (!out) throw DataError("cannot open " + path.string() + " for writing");
  write_dataset_csv(out, data);
}

Dataset read_dataset_csv(std::istream& in, SamplingScheme scheme, std::optional<double> omega_design,
                         const std::string& source) {
  std::string line;
  std::size_t line_no = 0;
  std::vector<std::string> header;
  while (std::getline(in, line)) {
    ++line_no;
    if (!trim(line).empty()) {
      header = split(line);
      break;
    }
  }
  if (header.empty()) throw DataError(source + ": empty dataset");
  if (header.size() < 2 || header[0] != "y" || header[1] != "a") {
    throw DataError(source + ": header must start with y,a");
  }
  const std::size_t dim = header.size() - 2;
  for (std::size_t j = 0; j < dim; ++j) {
    if (header[j + 2] != "x" + std::to_string(j + 1)) {
      throw DataError(source + ": feature column " + std::to_string(j + 1) + " must be named x" +
                      std::to_string(j + 1));
    }
  }

  std::vector<double> features;
  std::vector<int> a, y;
  std::size_t row = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    ++row;
    const auto cells = split(line);
    if (cells.size() != header.size()) {
      throw DataError(source + ": row " + std::to_string(row) + " has " + std::to_string(cells.size()) +
                      " fields, expected " + std::to_string(header.size()));
    }
    y.push_back(parse_binary(cells[0], "y", row, source));
    a.push_back(parse_binary(cells[1], "a", row, source));
    for (std::size_t j = 0; j < dim; ++j) {
      const auto v = parse_number(cells[j + 2]);
      if (!v) {
        throw DataError(source + ": row " + std::to_string(row) + ": x" + std::to_string(j + 1) +
                        " is not a finite number: '" + cells[j + 2] + "'");
      }
      features.push_back(*v);
    }
  }
  if (row == 0) throw DataError(source + ": empty dataset");
  return Dataset(dim, std::move(features), std::move(a), std::move(y), scheme, omega_design, 0);
}

Dataset read_dataset_csv(const std::filesystem::path& path, SamplingScheme scheme,
                         std::optional<double> omega_design) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open " + path.string());
  return read_dataset_csv(in, scheme, omega_design, path.string());
}

DiscreteDgp dgp_from_json(const Json& config) {
  if (!config.is_object() || !config.contains("strata") || !config["strata"].is_array()) {
    throw DataError("DGP config needs a \"strata\" array");
  }
  std::vector<Stratum> strata;
  std::size_t index = 0;
  for (const auto& s : config["strata"]) {
    ++index;
    const std::string where = "stratum " + std::to_string(index);
    if (!s.is_object()) throw DataError(where + " must be an object");
    Stratum st;
    if (s.contains("label")) st.label = s["label"].get<std::string>();
    if (s.contains("features")) {
      for (const auto& f : s["features"]) {
        if (!f.is_number()) throw DataError(where + ": features must be numbers");
        st.features.push_back(f.get<double>());
      }
    }
    for (const char* key : {"p_x", "pi1", "nu1", "nu0"}) {
      if (!s.contains(key)) throw DataError(where + ": missing " + key);
    }
    st.p_x = parse_probability(s["p_x"], where + " p_x");
    st.pi1 = parse_probability(s["pi1"], where + " pi1");
    st.nu1 = parse_probability(s["nu1"], where + " nu1");
    st.nu0 = parse_probability(s["nu0"], where + " nu0");
    strata.push_back(std::move(st));
  }
  const Real eps = config.contains("eps") ? parse_probability(config["eps"], "eps") : kDefaultOverlapEps;
  try {
    return DiscreteDgp(std::move(strata), eps);
  } catch (const InvalidArgument& e) {
    throw DataError(std::string("invalid DGP config: ") + e.what());
  }
}

Json dgp_to_json(const DiscreteDgp& dgp) {
  Json strata = Json::array();
  for (const Stratum& s : dgp.strata()) {
    strata.push_back({{"label", s.label},
                      {"features", s.features},
                      {"p_x", static_cast<double>(s.p_x)},
                      {"pi1", static_cast<double>(s.pi1)},
                      {"nu1", static_cast<double>(s.nu1)},
                      {"nu0", static_cast<double>(s.nu0)}});
  }
  return {{"eps", static_cast<double>(dgp.eps())}, {"strata", strata}};
}

Json read_json_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open " + path.string());
  try {
    return Json::parse(in);
  } catch (const Json::parse_error& e) {
    throw DataError(path.string() + ": " + e.what());
  }
}

DiscreteDgp load_dgp(const std::filesystem::path& path) { return dgp_from_json(read_json_file(path)); }

}  // namespace godds
