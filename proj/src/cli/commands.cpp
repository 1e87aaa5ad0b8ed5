#include <algorithm>
#include <charconv>
#include <chrono>
#include <fstream>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "msr/baselines.hpp"
#include "msr/cli.hpp"
#include "msr/growth.hpp"
#include "msr/query.hpp"

namespace msr::cli {

using nlohmann::json;

int exit_code_for(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::parse: return exit_parse;
    case ErrorKind::io: return exit_io;
    case ErrorKind::empty_result:
    case ErrorKind::too_large: return exit_no_result;
    case ErrorKind::invalid_argument:
    case ErrorKind::membership:
    case ErrorKind::horizon_violation:
    case ErrorKind::out_of_domain:
    case ErrorKind::invariant:
    case ErrorKind::mismatch:
    case ErrorKind::missing_level: return exit_invariant;
  }
  return exit_invariant;
}

namespace {

std::string one_line(std::string s) {
  std::replace(s.begin(), s.end(), '\n', ' ');
  std::replace(s.begin(), s.end(), '"', '\'');
  return s;
}

void report_error(std::ostream& err, std::string_view kind, const std::string& message) {
  err << "error: kind=" << kind << " message=\"" << one_line(message) << "\"\n";
}

PointId point_arg(int id, const Instance& inst, const char* what) {
  if (id < 0 || id >= inst.size()) {
    throw Error(ErrorKind::invalid_argument, std::string(what) + " " + std::to_string(id) + " not in instance");
  }
  return PointId(id);
}

// "<id>" or "<x>,<y>" (the latter needs coordinates).
Origin parse_origin(const std::string& text, const Instance& inst) {
  const auto comma = text.find(',');
  if (comma == std::string::npos) {
    int id = 0;
    auto [end, ec] = std::from_chars(text.data(), text.data() + text.size(), id);
    if (ec != std::errc{} || end != text.data() + text.size()) {
      throw Error(ErrorKind::invalid_argument, "origin must be a point id or 'x,y', got '" + text + "'");
    }
    return Origin::at_point(point_arg(id, inst, "origin"));
  }
  double x = 0.0, y = 0.0;
  try {
    x = parse_double(std::string_view(text).substr(0, comma));
    y = parse_double(std::string_view(text).substr(comma + 1));
  } catch (const Error&) {
    throw Error(ErrorKind::invalid_argument, "origin must be a point id or 'x,y', got '" + text + "'");
  }
  if (!inst.has_coordinates()) throw Error(ErrorKind::invalid_argument, "coordinate origin needs an instance with coordinates");
  return Origin::with_costs(inst.euclidean_costs_from(Coord{x, y}));
}

json sequence_json(const Sequence& s) {
  json ids = json::array();
  for (PointId p : s.points()) ids.push_back(p.index());
  return ids;
}

json stats_json(const GenerationStats& stats, bool timing) {
  json levels = json::array();
  for (const auto& l : stats.levels) {
    json row{{"length", l.length},
             {"enumerated", l.enumerated_extensions},
             {"kept_after_ip", l.kept_after_ip},
             {"kept_after_batch", l.kept_after_batch},
             {"peak_live", l.peak_live_candidates}};
    if (timing) row["wall_ms"] = std::chrono::duration<double, std::milli>(l.wall_time).count();
    levels.push_back(row);
  }
  return json{{"levels", levels}, {"total_enumerated", stats.total_enumerated()}};
}

void write_text(const std::string& path, const std::string& text, std::ostream& out) {
  if (path.empty() || path == "-") {
    out << text;
    return;
  }
  std::ofstream f(path);
  if (!f) throw Error(ErrorKind::io, "cannot write " + path);
  f << text;
  if (!f) throw Error(ErrorKind::io, "write failed for " + path);
}

struct VerifyOutcome {
  std::size_t checks = 0;
  std::size_t mismatches = 0;
  std::string first_mismatch;
};

void compare(VerifyOutcome& v, double engine, double oracle, const std::string& where) {
  ++v.checks;
  if (!approx_equal(engine, oracle, 1e-12)) {
    if (v.mismatches++ == 0) {
      std::ostringstream s;
      s << where << ": engine " << format_double(engine) << " oracle " << format_double(oracle);
      v.first_mismatch = s.str();
    }
  }
}

VerifyOutcome run_verify(int n, int seeds, int trials, std::uint64_t base_seed) {
  VerifyOutcome v;
  for (int k = 0; k < seeds; ++k) {
    const std::uint64_t seed = base_seed + static_cast<std::uint64_t>(k);
    const Instance inst = gen_synthetic(n, seed);
    const auto ip = bp_growth(inst, n).store;
    const auto ibp = store_batch_view(ip);

    std::mt19937_64 rng(seed ^ 0x5DEECE66Dull);
    std::uniform_real_distribution<double> where(0.0, 100.0);
    std::uniform_int_distribution<int> point(0, n - 1);

    const PointId dest(point(rng));
    GrowthOptions dest_opts;
    dest_opts.destination = dest;
    const auto dest_store = bp_growth(inst, n, dest_opts).store;
    const auto dest_view = store_batch_view(dest_store);

    for (int t = 0; t < trials; ++t) {
      const Origin origin = Origin::with_costs(inst.euclidean_costs_from(Coord{where(rng), where(rng)}));
      for (int lo = 1; lo <= n; ++lo) {
        for (int hi = lo; hi <= n; ++hi) {
          const std::string tag = "seed " + std::to_string(seed) + " trial " + std::to_string(t) + " L[" +
                                  std::to_string(lo) + "," + std::to_string(hi) + "]";
          const double oracle = brute_force(inst, origin, lo, hi).cost;
          const Query q{origin, lo, hi, {}};
          compare(v, route_online(ip, inst, q).cost, oracle, tag + " IP");
          compare(v, route_online(ibp, inst, q).cost, oracle, tag + " IBP");

          const double dest_oracle = brute_force(inst, origin, lo, hi, dest).cost;
          const Query dq{origin, lo, hi, dest};
          compare(v, route_online_dest(dest_store, inst, dq).cost, dest_oracle, tag + " dest IP");
          compare(v, route_online_dest(dest_view, inst, dq).cost, dest_oracle, tag + " dest IBP");
        }
      }
    }
  }
  return v;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Route recommendation engine: precompute candidate sequences, answer queries, verify, report"};
  app.require_subcommand(1);

  std::string instance_path, store_path, stats_path, origin_text, out_path;
  int l_min = 1, l_max = 0, n = 10, seeds = 20, trials = 50, threads = 1;
  std::optional<int> dest;
  std::uint64_t seed = 42;
  double tol = 0.0, area = 100.0;
  bool batch = true, all_dests = false, timing = false;

  auto* gen = app.add_subcommand("gen", "Write a synthetic instance");
  gen->add_option("--n", n, "Number of pick-up points")->required();
  gen->add_option("--seed", seed, "Random seed");
  gen->add_option("--area", area, "Side of the square holding the points");
  gen->add_option("--out", out_path, "Output file (default: standard output)");

  auto* pre = app.add_subcommand("precompute", "Grow candidate sets and write a store");
  pre->add_option("--instance", instance_path)->required();
  pre->add_option("--l-max", l_max, "Longest sequence length")->required();
  pre->add_option("--store", store_path, "Store file to write")->required();
  pre->add_flag("--batch,!--no-batch", batch, "Apply batch pruning to the stored levels (default on)");
  pre->add_option("--tol", tol, "Relative tolerance for pruning comparisons");
  pre->add_option("--dest", dest, "Grow only sequences ending at this point");
  pre->add_flag("--all-dests", all_dests, "Prune per destination so any destination can be queried");
  pre->add_option("--threads", threads, "Worker threads");
  pre->add_option("--stats", stats_path, "Stats JSON file (default: standard output)");
  pre->add_flag("--timing", timing, "Include wall times in stats");

  auto* qry = app.add_subcommand("query", "Recommend routes for one origin");
  qry->add_option("--instance", instance_path)->required();
  qry->add_option("--store", store_path)->required();
  qry->add_option("--origin", origin_text, "Point id or 'x,y'")->required();
  qry->add_option("--l-min", l_min);
  qry->add_option("--l-max", l_max)->required();
  qry->add_option("--dest", dest, "Required last point");
  qry->add_option("--tol", tol, "Relative tolerance for reporting ties");

  auto* ver = app.add_subcommand("verify", "Compare the engine with exhaustive search on random instances");
  ver->add_option("--n", n)->default_val(6);
  ver->add_option("--seeds", seeds);
  ver->add_option("--trials", trials, "Random origins per instance");
  ver->add_option("--seed", seed, "First seed");

  auto* rep = app.add_subcommand("report", "Per-length pruning statistics as CSV");
  rep->add_option("--instance", instance_path)->required();
  rep->add_option("--l-max", l_max)->required();
  rep->add_flag("--timing", timing, "Fill the wall_ms column");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return exit_ok;
  } catch (const CLI::CallForAllHelp& e) {
    out << app.help("", CLI::AppFormatMode::All);
    return exit_ok;
  } catch (const CLI::ParseError& e) {
    report_error(err, "usage", e.what());
    return exit_usage;
  }

  try {
    if (gen->parsed()) {
      std::ostringstream text;
      write_instance(gen_synthetic(n, seed, area), text);
      write_text(out_path, text.str(), out);
      return exit_ok;
    }

    if (pre->parsed()) {
      const Instance inst = load_instance(instance_path);
      GrowthOptions opts;
      opts.batch = batch;
      opts.tol = tol;
      opts.threads = threads;
      opts.keyed_by_destination = all_dests;
      if (dest) opts.destination = point_arg(*dest, inst, "destination");
      const auto grown = bp_growth(inst, l_max, opts);
      save_store(grown.store, store_path);
      write_text(stats_path, stats_json(grown.stats, timing).dump(2) + "\n", out);
      return exit_ok;
    }

    if (qry->parsed()) {
      const Instance inst = load_instance(instance_path);
      const CandidateStore store = load_store(store_path, inst);
      Query q{parse_origin(origin_text, inst), l_min, l_max, {}};
      if (dest) q.destination = point_arg(*dest, inst, "destination");
      const RouteSet result = q.destination ? route_online_dest(store, inst, q, tol) : route_online(store, inst, q, tol);
      json routes = json::array();
      for (const Route& r : result.routes) {
        routes.push_back(json{{"sequence", sequence_json(r.candidate.seq)},
                              {"cost", r.cost},
                              {"f1", r.candidate.f1},
                              {"pe", r.candidate.pe}});
      }
      out << json{{"cost", result.cost}, {"evaluated", result.evaluated}, {"routes", routes}}.dump(2) << "\n";
      return exit_ok;
    }

    if (ver->parsed()) {
      if (seeds < 1 || trials < 1) throw Error(ErrorKind::invalid_argument, "seeds and trials must be positive");
      const VerifyOutcome v = run_verify(n, seeds, trials, seed);
      json summary{{"n", n}, {"seeds", seeds}, {"trials", trials}, {"checks", v.checks}, {"mismatches", v.mismatches}};
      out << summary.dump() << "\n";
      if (v.mismatches > 0) {
        report_error(err, "verification", std::to_string(v.mismatches) + " mismatches; first: " + v.first_mismatch);
        return exit_mismatch;
      }
      return exit_ok;
    }

    if (rep->parsed()) {
      const Instance inst = load_instance(instance_path);
      write_report_csv(build_report(inst, l_max, timing), out);
      return exit_ok;
    }
  } catch (const Error& e) {
    report_error(err, to_string(e.kind()), e.what());
    return exit_code_for(e.kind());
  } catch (const std::bad_alloc&) {
    report_error(err, "too_large", "out of memory");
    return exit_no_result;
  }
  return exit_usage;
}

}  // namespace msr::cli
