// Scenario runner: seeded missions or a four-algorithm comparison sweep.
//
//   rendezvous_cli --scenario presets/scenario4.json --algo fa --seed 7
//   rendezvous_cli --scenario presets/scenario4.json --compare --runs 30
//
// Exit codes: 0 rendezvous (or a completed sweep), 1 failed, 2 cancel,
// 3 invalid configuration, 4 unknown algorithm, 5 unreadable map,
// 6 internal error.

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <spdlog/sinks/stdout_color_sinks.h>
#include <spdlog/spdlog.h>

#include "CLI11.hpp"
#include "rendezvous/rendezvous.hpp"

namespace fs = std::filesystem;

namespace {

enum Exit { kOk = 0, kFailed = 1, kCancel = 2, kConfig = 3, kUnknownAlgo = 4, kMapError = 5, kInternal = 6 };

int outcome_code(rdv::Outcome o) {
  switch (o) {
    case rdv::Outcome::Rendezvous: return kOk;
    case rdv::Outcome::Failed: return kFailed;
    case rdv::Outcome::Cancel: return kCancel;
  }
  return kInternal;
}

void write_file(const fs::path& p, const std::string& body) {
  fs::create_directories(p.parent_path());
  std::ofstream f(p, std::ios::binary);
  if (!f) throw std::runtime_error("cannot write " + p.string());
  f << body;
}

struct Formats {
  bool csv = true, json = true, svg = true;
};

Formats parse_formats(const std::string& s) {
  Formats f{false, false, false};
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item == "csv") f.csv = true;
    else if (item == "json") f.json = true;
    else if (item == "svg") f.svg = true;
    else if (!item.empty()) throw rdv::InvalidConfig("unknown output format: " + item);
  }
  return f;
}

void write_artifacts(const fs::path& dir, const rdv::MissionLog& log, const rdv::Scenario& sc, const Formats& fmt) {
  write_file(dir / "events.log", rdv::events_log(log));
  if (fmt.json) write_file(dir / "summary.json", rdv::mission_json(log, sc.name, sc.mission).dump(2) + "\n");
  if (fmt.csv) {
    write_file(dir / "flown.csv", rdv::flown_csv(log));
    write_file(dir / "plans.csv", rdv::plans_csv(log));
    write_file(dir / "convergence.csv", rdv::mission_convergence_csv(log));
  }
  if (fmt.svg) {
    rdv::SvgOptions opt;
    opt.layers = sc.output.svg_layers;
    opt.depth_limit = log.plans.front().environment->grid().depth_limit();
    int k = 0;
    for (auto idx : rdv::frame_plan_indices(log, sc.output.svg_frames)) {
      char name[32];
      std::snprintf(name, sizeof name, "frame_%02d.svg", k++);
      write_file(dir / name, rdv::render_frame(log, idx, opt));
    }
  }
}

}  // namespace

int main(int argc, char** argv) {
  auto logger = spdlog::stderr_color_mt("rendezvous");
  spdlog::set_default_logger(logger);
  spdlog::set_pattern("[%l] %v");
  if (const char* lvl = std::getenv("RP_LOG_LEVEL")) spdlog::set_level(spdlog::level::from_str(lvl));

  CLI::App app{"AUV rendezvous planner: seeded missions and algorithm comparisons"};
  std::string scenario_path, algo_name, out_dir = "out", formats = "csv,json,svg";
  std::optional<std::uint64_t> seed;
  std::optional<int> runs;
  bool compare = false;
  app.add_option("--scenario", scenario_path, "scenario JSON file")->required();
  app.add_option("--algo", algo_name, "pso | bbo | fa | de (default: the scenario's algorithm)");
  app.add_option("--seed", seed, "run a single mission with this seed");
  app.add_option("--runs", runs, "number of seeds to run (taken from the scenario's seed list)");
  app.add_flag("--compare", compare, "run all four algorithms over the seeds and tabulate t_f");
  app.add_option("--out", out_dir, "output directory");
  app.add_option("--format", formats, "comma-separated subset of csv,json,svg");
  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kConfig;
  }

  rdv::Scenario sc;
  Formats fmt;
  std::shared_ptr<const rdv::GridMap> map;
  try {
    fmt = parse_formats(formats);
    sc = rdv::load_scenario(scenario_path);
    if (!algo_name.empty()) sc.algorithm = rdv::algorithm_from_string(algo_name);
    map = std::make_shared<const rdv::GridMap>(rdv::build_map(sc));
  } catch (const rdv::MapReadError& e) {
    spdlog::error("map: {}", e.what());
    return kMapError;
  } catch (const rdv::InvalidConfig& e) {
    const bool algo = std::string(e.what()).rfind("unknown algorithm", 0) == 0;
    spdlog::error("{}", e.what());
    return algo ? kUnknownAlgo : kConfig;
  } catch (const std::exception& e) {
    spdlog::error("configuration: {}", e.what());
    return kConfig;
  }

  std::vector<std::uint64_t> seeds;
  if (seed) {
    seeds = {*seed};
  } else if (runs) {
    if (*runs < 1) {
      spdlog::error("--runs must be at least 1");
      return kConfig;
    }
    for (int i = 0; i < *runs; ++i)
      seeds.push_back(i < static_cast<int>(sc.seeds.size()) ? sc.seeds[i] : sc.seeds.back() + (i - sc.seeds.size() + 1));
  } else {
    seeds = compare ? sc.seeds : std::vector<std::uint64_t>{sc.seeds.front()};
  }

  try {
    const auto setup = rdv::build_setup(sc, map);
    const fs::path root = fs::path(out_dir) / sc.name;
    const std::vector<rdv::Algorithm> algos =
        compare ? std::vector<rdv::Algorithm>(rdv::kAllAlgorithms.begin(), rdv::kAllAlgorithms.end())
                : std::vector<rdv::Algorithm>{sc.algorithm};
    int worst = kOk;
    nlohmann::json table = nlohmann::json::array();
    std::string csv = "algorithm,runs,rendezvous,within_window,mean_t_f,std_t_f\n";
    for (auto algo : algos) {
      std::vector<rdv::MissionLog> logs;
      for (auto s : seeds) {
        auto log = rdv::run_mission(setup, algo, s);
        spdlog::info("{} seed {}: {} t_f={:.1f} replans={} incursions={}", rdv::to_string(algo), s,
                     rdv::to_string(log.outcome), log.achieved_t_f, log.replans, log.incursions);
        write_artifacts(root / rdv::to_string(algo) / ("seed_" + std::to_string(s)), log, sc, fmt);
        worst = std::max(worst, outcome_code(log.outcome));
        logs.push_back(std::move(log));
      }
      const auto st = rdv::summarize(logs);
      table.push_back({{"algorithm", rdv::to_string(algo)},
                       {"runs", st.runs},
                       {"rendezvous", st.rendezvous},
                       {"within_window", st.within_window},
                       {"mean_t_f", st.mean_t_f},
                       {"std_t_f", st.std_t_f}});
      char row[160];
      std::snprintf(row, sizeof row, "%s,%d,%d,%d,%.3f,%.3f\n", rdv::to_string(algo), st.runs, st.rendezvous,
                    st.within_window, st.mean_t_f, st.std_t_f);
      csv += row;
    }
    if (compare || seeds.size() > 1) {
      write_file(root / "compare.csv", csv);
      write_file(root / "compare.json",
                 nlohmann::json{{"scenario", sc.name}, {"seeds", seeds}, {"algorithms", table}}.dump(2) + "\n");
      std::cout << "algorithm  runs  rendezvous  in_window  mean_t_f   std_t_f\n";
      for (const auto& r : table) {
        std::printf("%-9s  %4d  %10d  %9d  %8.1f  %8.1f\n", r["algorithm"].get<std::string>().c_str(),
                    r["runs"].get<int>(), r["rendezvous"].get<int>(), r["within_window"].get<int>(),
                    r["mean_t_f"].get<double>(), r["std_t_f"].get<double>());
      }
    }
    return compare ? kOk : worst;
  } catch (const rdv::InvalidConfig& e) {
    spdlog::error("{}", e.what());
    return kConfig;
  } catch (const rdv::PlacementError& e) {
    spdlog::error("scenario: {}", e.what());
    return kConfig;
  } catch (const std::exception& e) {
    spdlog::error("internal error: {}", e.what());
    return kInternal;
  }
}
