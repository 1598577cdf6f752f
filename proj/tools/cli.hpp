#pragma once

#include <functional>
#include <iosfwd>
#include <string>
#include <vector>

#include "json.hpp"
#include "lspec/metric.hpp"
#include "lspec/special.hpp"

namespace CLI {
class App;
}

namespace lspec::cli {

using Json = nlohmann::ordered_json;

inline constexpr const char* kSchema = "lspec/1";

std::string num(double x);  // 17 significant digits
Json cnum(cplx z);           // {"re", "im"}
Json nums(const std::vector<double>& v);

cplx parse_complex(const std::string& s);               // "1.5", "-2i", "1+2i", "i"
std::vector<double> parse_list(const std::string& s);   // "a,b,c" or "start:stop:step"
Vec parse_point(const std::string& s, int n);

struct Check {
  std::string name;
  double value = 0.0;
  double tol = 0.0;
  bool pass = false;
};

struct Table {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
  bool empty() const { return header.empty(); }
  std::string csv() const;  // RFC 4180, CRLF records
};

struct Report {
  Json result = Json::object();
  std::vector<Check> checks;
  Table table;
  std::string text;  // human-readable primary output (accept)
  void check(const std::string& name, double value, double tol) {
    checks.push_back({name, value, tol, value <= tol});
  }
  void require(const std::string& name, bool ok) { checks.push_back({name, ok ? 0.0 : 1.0, 0.0, ok}); }
  bool pass() const;
};

// Metric selection shared by several subcommands.
struct MetricOptions {
  std::string name = "minkowski";
  int n = 4;
  double radius = 1.0, side = 2.0 * kPi, hubble = 1.0, lens = 5.0;
  std::string point;
  void add(CLI::App* sub);
  MetricPtr make() const;
  Vec at(const MetricField& m) const;
  bool flat() const { return name == "minkowski" || name == "ultrastatic-torus"; }
};

// A subcommand: registers its options and later runs with them.
struct Command {
  std::string name;
  std::string primary = "json";  // stdout format: json, csv or text
  CLI::App* app = nullptr;
  std::function<void(Report&)> run;
};

void register_commands(CLI::App& app, std::vector<Command>& out);

// Acceptance suite.
struct Criterion {
  int id = 0;
  std::string title;
  bool pass = false;
  bool skipped = false;
  double seconds = 0.0;
  std::string detail;
  Json data = Json::object();
};
std::vector<Criterion> run_acceptance(const std::string& suite, std::ostream* live);
std::string criterion_line(const Criterion& c);

}  // namespace lspec::cli
