// Copyright 2026 The stein-fisher Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.


#include <fstream>
#include <iostream>
#include <map>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "steinfisher/errors.hpp"
#include "steinfisher/experiment.hpp"

namespace {

int report(const steinfisher::Error& e) {
  nlohmann::json err{{"error", std::string(steinfisher::to_string(e.code()))}, {"message", e.what()}};
  int status = 1;
  if (const auto* c = dynamic_cast<const steinfisher::ConfigError*>(&e)) {
    err["field"] = c->field();
    status = 2;
  } else if (const auto* p = dynamic_cast<const steinfisher::ParseError*>(&e)) {
    err["line"] = p->line();
    status = 2;
  } else if (const auto* g = dynamic_cast<const steinfisher::GuardDominated*>(&e)) {
    err["guarded_fraction"] = g->guarded_fraction();
    err["estimate"] = g->estimate();
    status = 3;
  }
  std::cerr << err.dump() << '\n';
  return status;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Monte Carlo estimates of Fisher information distances to the normal law"};
  app.require_subcommand(1);

  auto* run = app.add_subcommand("run", "run one experiment");
  std::string config_path;
  run->add_option("--config", config_path, "key=value configuration file");
  std::map<std::string, std::string> overrides;
  for (const std::string& key : steinfisher::config_keys()) {
    run->add_option_function<std::string>(
        "--" + key, [&overrides, key](const std::string& v) { overrides[key] = v; },
        "override '" + key + "'");
  }

  auto* catalog = app.add_subcommand("catalog", "list built-in distributions");

  CLI11_PARSE(app, argc, argv);

  if (*catalog) {
    for (const auto& name : steinfisher::catalog_names()) std::cout << name << '\n';
    return 0;
  }

  try {
    steinfisher::ExperimentConfig config =
        config_path.empty() ? steinfisher::ExperimentConfig{} : steinfisher::load_config(config_path);
    for (const auto& [key, value] : overrides) steinfisher::apply_setting(config, key, value);
    const steinfisher::ExperimentResult result = steinfisher::run(config);
    for (const auto& note : result.notes) std::cerr << "note: " << note << '\n';

    std::ofstream file;
    if (!config.out.empty()) {
      file.open(config.out);
      if (!file) throw steinfisher::ConfigError("out", "cannot write '" + config.out + "'");
    }
    std::ostream& out = config.out.empty() ? std::cout : file;
    if (config.format == "json") {
      steinfisher::write_json(result.rows, out);
    } else {
      steinfisher::write_csv(result.rows, out);
    }
  } catch (const steinfisher::Error& e) {
    return report(e);
  } catch (const std::exception& e) {
    std::cerr << nlohmann::json{{"error", "Internal"}, {"message", e.what()}}.dump() << '\n';
    return 1;
  }
  return 0;
}
