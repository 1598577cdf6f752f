#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <set>

#include "CLI11.hpp"
#include "cli.hpp"
#include "lspec/parallel.hpp"

using namespace lspec;
using namespace lspec::cli;

namespace {

struct Global {
  int threads = 0;
  std::string json, csv, manifest, format = "auto";
};

std::string option_value(const CLI::Option* o) {
  if (o->count() == 0) return o->get_default_str();
  std::string s;
  for (auto& r : o->results()) s += (s.empty() ? "" : ",") + r;
  return s;
}

Json options_json(const CLI::App& a) {
  Json j = Json::object();
  for (const CLI::Option* o : a.get_options()) {
    if (o->get_lnames().empty()) continue;
    const std::string nm = o->get_lnames().front();
    if (nm == "help" || nm == "config") continue;
    j[nm] = option_value(o);
  }
  return j;
}

Json error_doc(const std::string& command, const std::string& kind, const std::string& msg) {
  return Json{{"schema", kSchema}, {"command", command}, {"error", Json{{"kind", kind}, {"message", msg}}}};
}

// write to a sibling temporary, then rename
void write_file(const std::string& path, const std::string& content) {
  const std::string tmp = path + ".tmp";
  {
    std::ofstream f(tmp, std::ios::binary);
    if (!f) throw ConfigError("cannot open output '" + path + "'");
    f << content;
    if (!f) throw ConfigError("cannot write output '" + path + "'");
  }
  std::filesystem::rename(tmp, path);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"lspec: Lorentzian spectral geometry computations"};
  app.set_config("--config", "", "TOML config: global keys plus one [subcommand] table");
  app.allow_config_extras(CLI::config_extras_mode::error);
  app.fallthrough();
  app.require_subcommand(1);
  Global g;
  app.add_option("--threads", g.threads, "worker threads (0: hardware; LSPEC_THREADS wins)")
      ->capture_default_str()
      ->check(CLI::NonNegativeNumber);
  app.add_option("--json", g.json, "write the JSON document here")->capture_default_str();
  app.add_option("--csv", g.csv, "write the table here")->capture_default_str();
  app.add_option("--manifest", g.manifest, "write the manifest here")->capture_default_str();
  app.add_option("--format", g.format, "stdout format")
      ->capture_default_str()
      ->check(CLI::IsMember({"auto", "json", "csv", "text"}));
  std::vector<Command> cmds;
  register_commands(app, cmds);
  for (auto& c : cmds) c.app->configurable();

  std::string name = "";
  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cout << error_doc("", "ConfigError", e.what()).dump(2) << "\n";
    return 2;
  }

  try {
    std::set<std::string> names;
    for (auto* s : app.get_subcommands()) names.insert(s->get_name());
    if (names.size() != 1) throw ConfigError("exactly one subcommand is required");
    name = *names.begin();
    const Command* cmd = nullptr;
    for (auto& c : cmds)
      if (c.name == name) cmd = &c;

    const char* env = std::getenv("LSPEC_THREADS");
    if (!env || std::atoi(env) <= 0) set_thread_count(g.threads);
    std::string fmt = g.format == "auto" ? cmd->primary : g.format;
    for (const std::string* p : {&g.json, &g.csv, &g.manifest})
      if (!p->empty()) {
        auto dir = std::filesystem::path(*p).parent_path();
        if (!dir.empty() && !std::filesystem::is_directory(dir))
          throw ConfigError("output directory '" + dir.string() + "' does not exist");
      }

    Json manifest{{"schema", kSchema},
                  {"command", name},
                  {"threads", thread_count()},
                  {"global", options_json(app)},
                  {"config", options_json(*cmd->app)}};

    Report rep;
    cmd->run(rep);

    Json checks = Json::array();
    for (auto& c : rep.checks)
      checks.push_back(Json{{"name", c.name}, {"value", num(c.value)}, {"tol", num(c.tol)}, {"pass", c.pass}});
    Json doc{{"schema", kSchema}, {"command", name}, {"manifest", manifest},
             {"result", rep.result}, {"checks", checks}, {"pass", rep.pass()}};
    const std::string doc_s = doc.dump(2) + "\n";

    if (!g.csv.empty() && rep.table.empty()) throw ConfigError("'" + name + "' produces no table for --csv");
    if (fmt == "csv" && rep.table.empty()) fmt = "json";
    if (fmt == "text" && rep.text.empty()) fmt = "json";

    if (!g.json.empty()) write_file(g.json, doc_s);
    if (!g.csv.empty()) write_file(g.csv, rep.table.csv());
    if (!g.manifest.empty()) write_file(g.manifest, manifest.dump(2) + "\n");
    if (fmt == "json") {
      std::cout << doc_s;
    } else {
      std::cout << (fmt == "csv" ? rep.table.csv() : rep.text);
      if (g.json.empty() && g.manifest.empty()) std::cerr << manifest.dump() << "\n";
    }
    std::cout.flush();
    return rep.pass() ? 0 : 1;
  } catch (const ConfigError& e) {
    std::cout << error_doc(name, e.kind(), e.what()).dump(2) << "\n";
    return 2;
  } catch (const Error& e) {
    std::cout << error_doc(name, e.kind(), e.what()).dump(2) << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cout << error_doc(name, "InternalError", e.what()).dump(2) << "\n";
    return 1;
  }
}
