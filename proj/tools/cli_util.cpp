#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <regex>
#include <sstream>

#include "CLI11.hpp"
#include "cli.hpp"

namespace lspec::cli {

std::string num(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

Json cnum(cplx z) { return Json{{"re", num(z.real())}, {"im", num(z.imag())}}; }

Json nums(const std::vector<double>& v) {
  Json a = Json::array();
  for (double x : v) a.push_back(num(x));
  return a;
}

namespace {
double to_double(const std::string& s, const std::string& what) {
  std::size_t pos = 0;
  double v = 0;
  try {
    v = std::stod(s, &pos);
  } catch (const std::exception&) {
    throw ConfigError("cannot read " + what + " from '" + s + "'");
  }
  if (pos != s.size()) throw ConfigError("trailing characters in " + what + " '" + s + "'");
  return v;
}
std::string strip(std::string s) {
  s.erase(std::remove_if(s.begin(), s.end(), [](unsigned char c) { return std::isspace(c); }), s.end());
  return s;
}
}  // namespace

cplx parse_complex(const std::string& raw) {
  const std::string s = strip(raw);
  static const std::string r = R"(([+-]?(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?))";
  static const std::regex real_only("^" + r + "$");
  static const std::regex imag_only(R"(^([+-]?)((?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?)?[ij]$)");
  static const std::regex both("^" + r + R"(([+-])((?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?)?[ij]$)");
  std::smatch m;
  if (std::regex_match(s, m, real_only)) return {std::stod(m[1]), 0.0};
  if (std::regex_match(s, m, imag_only)) {
    double v = m[2].matched ? std::stod(m[2]) : 1.0;
    return {0.0, m[1] == "-" ? -v : v};
  }
  if (std::regex_match(s, m, both)) {
    double v = m[3].matched ? std::stod(m[3]) : 1.0;
    return {std::stod(m[1]), m[2] == "-" ? -v : v};
  }
  throw ConfigError("cannot read a complex number from '" + raw + "'");
}

std::vector<double> parse_list(const std::string& raw) {
  const std::string s = strip(raw);
  std::vector<double> out;
  if (s.empty()) throw ConfigError("empty list");
  if (s.find(':') != std::string::npos) {
    std::vector<std::string> p;
    std::stringstream ss(s);
    std::string tok;
    while (std::getline(ss, tok, ':')) p.push_back(tok);
    if (p.size() != 3) throw ConfigError("range must look like start:stop:step, got '" + raw + "'");
    double a = to_double(p[0], "range start"), b = to_double(p[1], "range stop"),
           h = to_double(p[2], "range step");
    if (!(h > 0) || b < a) throw ConfigError("range needs step > 0 and stop >= start");
    const long count = std::lround(std::floor((b - a) / h + 1e-9)) + 1;
    if (count > 100000) throw ConfigError("range has too many points");
    for (long i = 0; i < count; ++i) out.push_back(a + double(i) * h);
    return out;
  }
  std::stringstream ss(s);
  std::string tok;
  while (std::getline(ss, tok, ',')) out.push_back(to_double(tok, "list entry"));
  return out;
}

Vec parse_point(const std::string& s, int n) {
  auto v = parse_list(s);
  if (int(v.size()) != n)
    throw ConfigError("point needs " + std::to_string(n) + " coordinates, got " + std::to_string(v.size()));
  return Eigen::Map<Vec>(v.data(), n);
}

std::string Table::csv() const {
  auto field = [](const std::string& f) {
    if (f.find_first_of(",\"\r\n") == std::string::npos) return f;
    std::string q = "\"";
    for (char c : f) {
      if (c == '"') q += '"';
      q += c;
    }
    return q + "\"";
  };
  std::ostringstream o;
  auto line = [&](const std::vector<std::string>& r) {
    for (std::size_t i = 0; i < r.size(); ++i) o << (i ? "," : "") << field(r[i]);
    o << "\r\n";
  };
  line(header);
  for (auto& r : rows) line(r);
  return o.str();
}

bool Report::pass() const {
  for (auto& c : checks)
    if (!c.pass) return false;
  return true;
}

void MetricOptions::add(CLI::App* sub) {
  sub->add_option("--metric", name, "metric name or table file")->capture_default_str();
  sub->add_option("--n", n, "dimension")->capture_default_str()->check(CLI::Range(2, 8));
  sub->add_option("--radius", radius, "sphere radius")->capture_default_str()->check(CLI::PositiveNumber);
  sub->add_option("--side", side, "torus side")->default_str(num(side))->check(CLI::PositiveNumber);
  sub->add_option("--hubble", hubble, "expansion rate")->capture_default_str();
  sub->add_option("--lens", lens, "lens strength")->capture_default_str();
  sub->add_option("--point", point, "comma separated coordinates (default: reference point)")
      ->capture_default_str();
}

MetricPtr MetricOptions::make() const {
  MetricSpec s;
  s.name = name;
  s.n = n;
  s.radius = radius;
  s.side = side;
  s.hubble = hubble;
  s.lens = lens;
  return make_metric(s);
}

Vec MetricOptions::at(const MetricField& m) const {
  if (point.empty()) return default_point(m);
  Vec x = parse_point(point, m.dim());
  try {
    m.check_point(x.data());
  } catch (const DomainError& e) {
    throw ConfigError(e.what());
  }
  return x;
}

}  // namespace lspec::cli
