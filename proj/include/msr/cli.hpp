#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "msr/core.hpp"
#include "msr/growth.hpp"

namespace msr::cli {

// ---------------------------------------------------------------------------
// Instance files
//
//   msr-instance 1
//   n 3
//   horizon 25 [unchecked]
//   metric distance|time
//   coords yes|no
//   point <id> <prob> [<x> <y>]
//   costs euclidean            (needs coords yes)
//   costs matrix
//   <n rows of n costs>
//
// '#' starts a comment. Numbers are written in shortest round-trip form.

Instance parse_instance(std::istream& in);
void write_instance(const Instance& inst, std::ostream& out);
Instance load_instance(const std::filesystem::path& path);
void save_instance(const Instance& inst, const std::filesystem::path& path);

// ---------------------------------------------------------------------------
// Store files
//
//   msr-store 1 fingerprint=<hex> mode=ip|ibp dest=none|all|<id> levels=1,2,3
//   <length> <ids...> <f1> <pe>

void write_store(const CandidateStore& store, std::ostream& out);
/// Verifies the fingerprint against `inst` and recomputes f1/pe for a 1%
/// sample (at least one candidate) before accepting.
CandidateStore parse_store(std::istream& in, const Instance& inst);
CandidateStore load_store(const std::filesystem::path& path, const Instance& inst);
void save_store(const CandidateStore& store, const std::filesystem::path& path);

std::string format_double(double v);
double parse_double(std::string_view text);

// ---------------------------------------------------------------------------
// Synthetic instances

/// n points with coordinates uniform on [0, area]^2 and probabilities
/// uniform on [0, 1]; Euclidean costs. The horizon exceeds the validation
/// bound for every origin inside the square.
Instance gen_synthetic(int n, std::uint64_t seed, double area = 100.0);

// ---------------------------------------------------------------------------
// Report

struct ReportRow {
  std::string algorithm;  // IP, IBP, LCP, BFS-enum
  int n = 0;
  int length = 0;
  std::uint64_t enumerated = 0;
  std::uint64_t surviving = 0;
  double wall_ms = -1.0;  // negative when not measured

  double pruning_ratio() const;
};

/// Rows for every length in [1, l_max]. `enumerated` counts all sequences of
/// that length. LCP and BFS-enum rows are skipped at lengths whose full
/// enumeration exceeds the brute-force limit.
std::vector<ReportRow> build_report(const Instance& inst, int l_max, bool timing = false);
void write_report_csv(const std::vector<ReportRow>& rows, std::ostream& out);

// ---------------------------------------------------------------------------
// Commands

enum ExitCode : int {
  exit_ok = 0,
  exit_usage = 2,
  exit_parse = 3,
  exit_invariant = 4,
  exit_mismatch = 5,
  exit_io = 6,
  exit_no_result = 7,
};

int exit_code_for(ErrorKind kind);

/// Runs one command; args excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace msr::cli
