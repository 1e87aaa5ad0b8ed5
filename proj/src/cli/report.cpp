#include <chrono>
#include <ostream>
#include <vector>

#include "msr/baselines.hpp"
#include "msr/cli.hpp"
#include "msr/growth.hpp"
#include "msr/pruning.hpp"

namespace msr::cli {

namespace {

using Clock = std::chrono::steady_clock;

double ms_since(Clock::time_point start) {
  return std::chrono::duration<double, std::milli>(Clock::now() - start).count();
}

}  // namespace

double ReportRow::pruning_ratio() const {
  return PruneStats{static_cast<std::size_t>(enumerated), static_cast<std::size_t>(surviving)}.ratio();
}

std::vector<ReportRow> build_report(const Instance& inst, int l_max, bool timing) {
  const int n = inst.size();
  if (l_max < 1 || l_max > n) throw Error(ErrorKind::invalid_argument, "l_max must be in [1, n]");
  std::vector<ReportRow> rows;

  auto grown = bp_growth(inst, l_max);
  for (int length = 1; length <= l_max; ++length) {
    const std::uint64_t universe = sequence_count(n, length);
    const auto& stats = grown.stats.levels[length - 1];
    const double ip_ms = std::chrono::duration<double, std::milli>(stats.wall_time).count();

    ReportRow ip{"IP", n, length, universe, stats.kept_after_ip, timing ? ip_ms : -1.0};
    rows.push_back(ip);

    auto start = Clock::now();
    auto batch = batch_prune(grown.store.level(length));
    ReportRow ibp{"IBP", n, length, universe, batch.survivors.size(), timing ? ip_ms + ms_since(start) : -1.0};
    rows.push_back(ibp);

    if (universe > kBruteForceLimit) continue;

    start = Clock::now();
    const std::uint64_t lcp_kept = lcp_prune_level(inst, length, false).stats.kept;
    rows.push_back(ReportRow{"LCP", n, length, universe, lcp_kept, timing ? ms_since(start) : -1.0});

    start = Clock::now();
    std::uint64_t counted = 0;
    for_each_sequence(n, length, [&](const Sequence&) { ++counted; });
    rows.push_back(ReportRow{"BFS-enum", n, length, universe, counted, timing ? ms_since(start) : -1.0});
  }
  return rows;
}

void write_report_csv(const std::vector<ReportRow>& rows, std::ostream& out) {
  out << "algorithm,n,L,enumerated,surviving,pruning_ratio,wall_ms\n";
  for (const auto& r : rows) {
    out << r.algorithm << "," << r.n << "," << r.length << "," << r.enumerated << "," << r.surviving << ","
        << format_double(r.pruning_ratio()) << ",";
    if (r.wall_ms < 0.0) {
      out << "NA";
    } else {
      out << format_double(r.wall_ms);
    }
    out << "\n";
  }
}

}  // namespace msr::cli
