#include <algorithm>
#include <charconv>
#include <cstdio>
#include <fstream>
#include <istream>
#include <map>
#include <ostream>
#include <random>
#include <sstream>
#include <string>
#include <system_error>
#include <vector>

#include "msr/cli.hpp"

namespace msr::cli {

namespace {

constexpr double kSampleTolerance = 1e-9;

std::string hex64(std::uint64_t v) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

[[noreturn]] void parse_fail(int line, const std::string& what) {
  throw Error(ErrorKind::parse, "line " + std::to_string(line) + ": " + what);
}

long parse_int(std::string_view text, int line) {
  long v = 0;
  auto [end, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc{} || end != text.data() + text.size()) {
    parse_fail(line, "not an integer: '" + std::string(text) + "'");
  }
  return v;
}

// Deterministic 1% sample (at least one), seeded from the fingerprint.
void check_sample(const CandidateStore& store, const Instance& inst) {
  std::vector<const Candidate*> all;
  for (const auto& [length, level] : store.levels()) {
    for (const auto& c : level) all.push_back(&c);
  }
  if (all.empty()) return;
  const std::size_t k = std::max<std::size_t>(1, all.size() / 100);
  std::mt19937_64 rng(store.fingerprint());
  std::uniform_int_distribution<std::size_t> pick(0, all.size() - 1);
  for (std::size_t i = 0; i < k; ++i) {
    const Candidate& c = *all[pick(rng)];
    const double f1 = f1_direct(c.seq, inst);
    const double pe = pe_closed(c.seq, inst);
    if (!approx_equal(c.f1, f1, kSampleTolerance) || !approx_equal(c.pe, pe, kSampleTolerance)) {
      throw Error(ErrorKind::invariant, "stored f1/pe disagree with recomputation for a sampled candidate");
    }
  }
}

}  // namespace

void write_store(const CandidateStore& store, std::ostream& out) {
  out << "msr-store 1 fingerprint=" << hex64(store.fingerprint())
      << " mode=" << (store.mode() == StoreMode::ip_only ? "ip" : "ibp") << " dest=";
  if (store.destination()) {
    out << store.destination()->index();
  } else {
    out << (store.keyed_by_destination() ? "all" : "none");
  }
  out << " levels=";
  bool first = true;
  for (const auto& [length, level] : store.levels()) {
    out << (first ? "" : ",") << length;
    first = false;
  }
  out << "\n";
  for (const auto& [length, level] : store.levels()) {
    for (const Candidate& c : level) {
      out << length;
      for (PointId p : c.seq.points()) out << " " << p.index();
      out << " " << format_double(c.f1) << " " << format_double(c.pe) << "\n";
    }
  }
}

CandidateStore parse_store(std::istream& in, const Instance& inst) {
  std::string line;
  if (!std::getline(in, line)) parse_fail(1, "empty store file");

  std::istringstream header(line);
  std::string magic, version;
  header >> magic >> version;
  if (magic != "msr-store") parse_fail(1, "missing 'msr-store' header");
  if (version != "1") parse_fail(1, "unsupported store format version " + version);

  std::map<std::string, std::string> fields;
  for (std::string w; header >> w;) {
    const auto eq = w.find('=');
    if (eq == std::string::npos) parse_fail(1, "malformed header field '" + w + "'");
    fields[w.substr(0, eq)] = w.substr(eq + 1);
  }
  for (const char* key : {"fingerprint", "mode", "dest", "levels"}) {
    if (!fields.contains(key)) parse_fail(1, std::string("header lacks ") + key);
  }

  std::uint64_t fingerprint = 0;
  {
    const auto& f = fields["fingerprint"];
    auto [end, ec] = std::from_chars(f.data(), f.data() + f.size(), fingerprint, 16);
    if (ec != std::errc{} || end != f.data() + f.size()) parse_fail(1, "bad fingerprint '" + f + "'");
  }
  StoreMode mode = StoreMode::ip_only;
  if (fields["mode"] == "ibp") {
    mode = StoreMode::ip_plus_batch;
  } else if (fields["mode"] != "ip") {
    parse_fail(1, "mode must be 'ip' or 'ibp'");
  }
  std::optional<PointId> destination;
  bool keyed = false;
  if (fields["dest"] == "all") {
    keyed = true;
  } else if (fields["dest"] != "none") {
    const long d = parse_int(fields["dest"], 1);
    if (d < 0 || d >= inst.size()) parse_fail(1, "destination out of range");
    destination = PointId(static_cast<int>(d));
  }

  CandidateStore store(fingerprint, mode, destination, keyed);
  store.check_instance(inst);

  std::map<int, std::vector<Candidate>> levels;
  {
    std::string list = fields["levels"];
    std::replace(list.begin(), list.end(), ',', ' ');
    std::istringstream ls(list);
    for (std::string w; ls >> w;) {
      const long l = parse_int(w, 1);
      if (l < 1 || l > inst.size()) parse_fail(1, "level " + w + " out of range");
      levels[static_cast<int>(l)];
    }
  }

  int line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    std::istringstream rs(line);
    std::vector<std::string> words;
    for (std::string w; rs >> w;) words.push_back(std::move(w));
    if (words.empty()) continue;
    const long length = parse_int(words[0], line_no);
    if (!levels.contains(static_cast<int>(length))) {
      parse_fail(line_no, "record of length " + words[0] + " not listed in header");
    }
    if (static_cast<long>(words.size()) != length + 3) parse_fail(line_no, "record has wrong field count");
    std::vector<PointId> pts;
    for (long k = 1; k <= length; ++k) {
      const long id = parse_int(words[k], line_no);
      if (id < 0 || id >= inst.size()) parse_fail(line_no, "point id " + words[k] + " out of range");
      pts.emplace_back(static_cast<int>(id));
    }
    Candidate c;
    try {
      c.seq = Sequence(pts);
      c.f1 = parse_double(words[length + 1]);
      c.pe = parse_double(words[length + 2]);
    } catch (const Error& e) {
      parse_fail(line_no, e.what());
    }
    levels[static_cast<int>(length)].push_back(c);
  }
  for (auto& [length, level] : levels) store.set_level(length, std::move(level));
  check_sample(store, inst);
  return store;
}

CandidateStore load_store(const std::filesystem::path& path, const Instance& inst) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::io, "cannot open store file " + path.string());
  return parse_store(in, inst);
}

void save_store(const CandidateStore& store, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorKind::io, "cannot write store file " + path.string());
  write_store(store, out);
  if (!out) throw Error(ErrorKind::io, "write failed for " + path.string());
}

}  // namespace msr::cli
