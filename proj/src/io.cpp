#include "weylkern/io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include <unistd.h>

namespace weylkern {

namespace {

std::vector<std::string> split(std::string_view text, char sep) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    const auto pos = text.find(sep, start);
    out.emplace_back(text.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start));
    if (pos == std::string_view::npos) return out;
    start = pos + 1;
  }
}

std::string trim(std::string_view s) {
  const auto a = s.find_first_not_of(" \t\r");
  if (a == std::string_view::npos) return {};
  const auto b = s.find_last_not_of(" \t\r");
  return std::string(s.substr(a, b - a + 1));
}

std::string join(const std::vector<double>& v) {
  std::string out;
  for (std::size_t i = 0; i < v.size(); ++i) out += (i ? ";" : "") + format_double(v[i]);
  return out;
}

std::vector<double> split_doubles(std::string_view text) {
  std::vector<double> out;
  if (trim(text).empty()) return out;
  for (const auto& part : split(text, ';')) out.push_back(parse_double(part));
  return out;
}

void dump(const nlohmann::json& j, std::string& out) {
  switch (j.type()) {
    case nlohmann::json::value_t::object: {
      out += '{';
      bool first = true;
      for (auto it = j.begin(); it != j.end(); ++it) {
        if (!first) out += ',';
        first = false;
        out += nlohmann::json(it.key()).dump();
        out += ':';
        dump(it.value(), out);
      }
      out += '}';
      break;
    }
    case nlohmann::json::value_t::array: {
      out += '[';
      for (std::size_t i = 0; i < j.size(); ++i) {
        if (i) out += ',';
        dump(j[i], out);
      }
      out += ']';
      break;
    }
    case nlohmann::json::value_t::number_float: {
      const double x = j.get<double>();
      // JSON has no literal for non-finite numbers.
      out += std::isfinite(x) ? format_double(x) : "null";
      break;
    }
    default:
      out += j.dump();
  }
}

// Non-finite bounds are carried as the strings "inf", "-inf" and "nan".
nlohmann::json bounds_json(const std::vector<double>& v) {
  nlohmann::json out = nlohmann::json::array();
  for (double x : v) out.push_back(std::isfinite(x) ? nlohmann::json(x) : nlohmann::json(format_double(x)));
  return out;
}

std::vector<double> bounds_from_json(const nlohmann::json& j) {
  std::vector<double> out;
  for (const auto& x : j) out.push_back(x.is_string() ? parse_double(x.get<std::string>()) : x.get<double>());
  return out;
}

}  // namespace

std::string library_version() { return "0.1.0"; }

std::string format_double(double x) {
  char buf[64];
  const auto r = std::to_chars(buf, buf + sizeof buf, x, std::chars_format::general, 17);
  return std::string(buf, r.ptr);
}

double parse_double(std::string_view text) {
  const std::string s = trim(text);
  double x = 0;
  const char* begin = s.data();
  if (!s.empty() && s[0] == '+') ++begin;
  const auto r = std::from_chars(begin, s.data() + s.size(), x);
  if (s.empty() || r.ec != std::errc() || r.ptr != s.data() + s.size())
    throw DomainError("not a number: '" + s + "'");
  return x;
}

std::string dump_json(const nlohmann::json& j) {
  std::string out;
  dump(j, out);
  return out;
}

ParsedPoint parse_point(std::string_view text) {
  const auto parts = split(text, ',');
  ParsedPoint p{Eigen::VectorXd(static_cast<Eigen::Index>(parts.size())), VectorQ(static_cast<Eigen::Index>(parts.size()))};
  for (std::size_t i = 0; i < parts.size(); ++i) {
    const std::string s = trim(parts[i]);
    const auto k = static_cast<Eigen::Index>(i);
    p.exact[k] = parse_rational(s);
    // Decimals are rounded once from the text; fractions from the exact value.
    p.value[k] = s.find('/') == std::string::npos ? parse_double(s) : p.exact[k].convert_to<double>();
  }
  return p;
}

std::vector<double> parse_list(std::string_view text) {
  std::vector<double> out;
  for (const auto& part : split(text, ',')) out.push_back(parse_double(part));
  return out;
}

std::string config_comment(const nlohmann::json& config) {
  return "# weylkern " + library_version() + " config=" + dump_json(config);
}

std::string histogram_csv(const Histogram& h, const nlohmann::json& config) {
  std::string out = config_comment(config) + "\n";
  out += "# coordinates=" + h.coordinates + "\n";
  out += "bin_lo,bin_hi,count,expected,excluded,label\n";
  for (const auto& b : h.bins) {
    if (b.label.find_first_of(",\n\"") != std::string::npos) throw DomainError("bin label not representable in CSV");
    out += join(b.lo) + "," + join(b.hi) + "," + format_double(b.count) + "," + format_double(b.expected) + "," +
           (b.excluded ? "1" : "0") + "," + b.label + "\n";
  }
  return out;
}

Histogram parse_histogram_csv(std::string_view text) {
  Histogram h;
  bool header = false;
  for (const auto& raw : split(text, '\n')) {
    const std::string line = trim(raw);
    if (line.empty()) continue;
    if (line[0] == '#') {
      constexpr std::string_view key = "# coordinates=";
      if (line.rfind(key, 0) == 0) h.coordinates = line.substr(key.size());
      continue;
    }
    if (!header) {
      if (line.rfind("bin_lo,bin_hi,count,expected", 0) != 0) throw DomainError("missing histogram header row");
      header = true;
      continue;
    }
    const auto f = split(line, ',');
    if (f.size() != 6) throw DomainError("histogram row needs 6 fields: '" + line + "'");
    Bin b;
    b.lo = split_doubles(f[0]);
    b.hi = split_doubles(f[1]);
    b.count = parse_double(f[2]);
    b.expected = parse_double(f[3]);
    b.excluded = trim(f[4]) == "1";
    b.label = f[5];
    h.bins.push_back(std::move(b));
  }
  if (!header) throw DomainError("missing histogram header row");
  return h;
}

nlohmann::json to_json(const Histogram& h) {
  nlohmann::json bins = nlohmann::json::array();
  for (const auto& b : h.bins)
    bins.push_back({{"lo", bounds_json(b.lo)}, {"hi", bounds_json(b.hi)}, {"count", b.count}, {"expected", b.expected},
                    {"excluded", b.excluded}, {"label", b.label}});
  return {{"coordinates", h.coordinates}, {"bins", bins}};
}

Histogram histogram_from_json(const nlohmann::json& j) {
  Histogram h;
  h.coordinates = j.at("coordinates").get<std::string>();
  for (const auto& b : j.at("bins")) {
    Bin bin;
    bin.lo = bounds_from_json(b.at("lo"));
    bin.hi = bounds_from_json(b.at("hi"));
    bin.count = b.at("count").get<double>();
    bin.expected = b.at("expected").get<double>();
    bin.excluded = b.at("excluded").get<bool>();
    bin.label = b.at("label").get<std::string>();
    h.bins.push_back(std::move(bin));
  }
  return h;
}

nlohmann::json to_json(const ComparisonReport& r) {
  return {{"statistic", r.statistic}, {"value", r.value}, {"threshold", r.threshold}, {"pass", r.pass},
          {"metadata", r.metadata}};
}

nlohmann::json to_json(const FacePairReport& r) {
  nlohmann::json witnesses = nlohmann::json::array();
  for (const auto& m : r.witnesses) {
    nlohmann::json rows = nlohmann::json::array();
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
      nlohmann::json row = nlohmann::json::array();
      for (Eigen::Index k = 0; k < m.cols(); ++k) row.push_back(format_rational(m(i, k)));
      rows.push_back(row);
    }
    witnesses.push_back(rows);
  }
  return {{"face_lambda", r.face_lambda}, {"face_y", r.face_y},   {"holds", r.holds},
          {"w_set", r.w_set},             {"stab_lambda", r.stab_lambda}, {"stab_y", r.stab_y},
          {"intersection", r.intersection}, {"product", r.product}, {"witnesses", witnesses}};
}

nlohmann::json summary_json(const SystemReport& r) {
  std::size_t failing = 0;
  for (const auto& p : r.pairs) failing += p.holds ? 0 : 1;
  return {{"system", r.system},           {"all_hold", r.all_hold},   {"pairs", r.pairs.size()},
          {"failing_pairs", failing},     {"group_order", r.group_order},
          {"distinct_patterns", r.distinct_patterns}};
}

void write_file_atomic(const std::filesystem::path& path, std::string_view content) {
  std::filesystem::path tmp = path;
  tmp += ".tmp." + std::to_string(::getpid());
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot write " + tmp.string());
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    out.close();
    if (!out) {
      std::error_code ec;
      std::filesystem::remove(tmp, ec);
      throw IoError("cannot write " + tmp.string());
    }
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) {
    std::filesystem::remove(tmp, ec);
    throw IoError("cannot replace " + path.string());
  }
}

}  // namespace weylkern
