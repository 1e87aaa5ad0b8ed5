#include <charconv>
#include <fstream>
#include <istream>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <system_error>
#include <vector>

#include "msr/cli.hpp"

namespace msr::cli {

std::string format_double(double v) {
  char buf[32];
  auto [end, ec] = std::to_chars(buf, buf + sizeof buf, v);
  if (ec != std::errc{}) throw Error(ErrorKind::invariant, "cannot format number");
  return std::string(buf, end);
}

double parse_double(std::string_view text) {
  double v = 0.0;
  auto [end, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc{} || end != text.data() + text.size()) {
    throw Error(ErrorKind::parse, "not a number: '" + std::string(text) + "'");
  }
  return v;
}

namespace {

class LineReader {
 public:
  explicit LineReader(std::istream& in) : in_(in) {}

  // Next non-blank line with comments stripped, split on whitespace.
  std::optional<std::vector<std::string>> next() {
    std::string line;
    while (std::getline(in_, line)) {
      ++line_no_;
      if (auto hash = line.find('#'); hash != std::string::npos) line.resize(hash);
      std::istringstream ss(line);
      std::vector<std::string> words;
      for (std::string w; ss >> w;) words.push_back(std::move(w));
      if (!words.empty()) return words;
    }
    return std::nullopt;
  }

  std::vector<std::string> expect(std::string_view what) {
    auto words = next();
    if (!words) fail("unexpected end of file, expected " + std::string(what));
    return *words;
  }

  [[noreturn]] void fail(const std::string& what) const {
    throw Error(ErrorKind::parse, "line " + std::to_string(line_no_) + ": " + what);
  }

  double number(const std::string& text) const {
    try {
      return parse_double(text);
    } catch (const Error& e) {
      fail(e.what());
    }
  }

  long integer(const std::string& text) const {
    long v = 0;
    auto [end, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
    if (ec != std::errc{} || end != text.data() + text.size()) fail("not an integer: '" + text + "'");
    return v;
  }

  int line() const { return line_no_; }

 private:
  std::istream& in_;
  int line_no_ = 0;
};

std::vector<std::string> keyword(LineReader& r, std::string_view key, std::size_t min_words, std::size_t max_words) {
  auto w = r.expect(key);
  if (w[0] != key) r.fail("expected '" + std::string(key) + "', got '" + w[0] + "'");
  if (w.size() < min_words || w.size() > max_words) r.fail("malformed '" + std::string(key) + "' line");
  return w;
}

}  // namespace

Instance parse_instance(std::istream& in) {
  LineReader r(in);
  auto magic = r.expect("header");
  if (magic.size() != 2 || magic[0] != "msr-instance") r.fail("missing 'msr-instance' header");
  if (magic[1] != "1") r.fail("unsupported instance format version " + magic[1]);

  const long n = r.integer(keyword(r, "n", 2, 2)[1]);
  if (n < 1 || n > kMaxPoints) r.fail("n must be in [1, 64], got " + std::to_string(n));

  auto hw = keyword(r, "horizon", 2, 3);
  const double horizon = r.number(hw[1]);
  HorizonPolicy policy = HorizonPolicy::enforce;
  if (hw.size() == 3) {
    if (hw[2] != "unchecked") r.fail("unknown horizon flag '" + hw[2] + "'");
    policy = HorizonPolicy::unchecked;
  }

  auto mw = keyword(r, "metric", 2, 2);
  MetricKind metric = MetricKind::distance;
  if (mw[1] == "time") {
    metric = MetricKind::time;
  } else if (mw[1] != "distance") {
    r.fail("metric must be 'distance' or 'time', got '" + mw[1] + "'");
  }

  auto cw = keyword(r, "coords", 2, 2);
  if (cw[1] != "yes" && cw[1] != "no") r.fail("coords must be 'yes' or 'no'");
  const bool has_coords = cw[1] == "yes";

  std::vector<double> probs(n);
  std::vector<Coord> coords(has_coords ? n : 0);
  for (long i = 0; i < n; ++i) {
    auto pw = keyword(r, "point", has_coords ? 5 : 3, has_coords ? 5 : 3);
    if (r.integer(pw[1]) != i) r.fail("expected point " + std::to_string(i) + ", got " + pw[1]);
    probs[i] = r.number(pw[2]);
    if (!(probs[i] >= 0.0 && probs[i] <= 1.0)) {
      r.fail("probability of point " + std::to_string(i) + " must lie in [0,1], got " + pw[2]);
    }
    if (has_coords) coords[i] = Coord{r.number(pw[3]), r.number(pw[4])};
  }

  auto kw = keyword(r, "costs", 2, 2);
  std::optional<Instance> inst;
  try {
    if (kw[1] == "euclidean") {
      if (!has_coords) r.fail("'costs euclidean' needs coords yes");
      inst.emplace(Instance::from_coordinates(std::move(probs), std::move(coords), horizon, metric, policy));
    } else if (kw[1] == "matrix") {
      if (has_coords) r.fail("coordinates are only supported with 'costs euclidean'");
      std::vector<double> costs;
      costs.reserve(n * n);
      for (long i = 0; i < n; ++i) {
        auto row = r.next();
        if (!row) r.fail("cost matrix has " + std::to_string(i) + " rows, expected " + std::to_string(n));
        if (static_cast<long>(row->size()) != n) {
          r.fail("cost matrix row " + std::to_string(i) + " has " + std::to_string(row->size()) +
                 " entries, expected " + std::to_string(n));
        }
        for (const auto& word : *row) costs.push_back(r.number(word));
      }
      inst.emplace(std::move(probs), std::move(costs), horizon, metric, policy);
    } else {
      r.fail("costs must be 'euclidean' or 'matrix'");
    }
  } catch (const Error& e) {
    if (e.kind() == ErrorKind::parse) throw;
    throw Error(e.kind(), "line " + std::to_string(r.line()) + ": " + e.what());
  }
  if (auto extra = r.next()) r.fail("unexpected content after cost block: '" + (*extra)[0] + "'");
  return std::move(*inst);
}

void write_instance(const Instance& inst, std::ostream& out) {
  const int n = inst.size();
  out << "msr-instance 1\n";
  out << "n " << n << "\n";
  out << "horizon " << format_double(inst.horizon());
  if (inst.horizon_policy() == HorizonPolicy::unchecked) out << " unchecked";
  out << "\n";
  out << "metric " << (inst.metric() == MetricKind::time ? "time" : "distance") << "\n";
  out << "coords " << (inst.euclidean() ? "yes" : "no") << "\n";
  for (int i = 0; i < n; ++i) {
    out << "point " << i << " " << format_double(inst.prob(PointId(i)));
    if (inst.euclidean()) {
      const Coord c = inst.coordinates()[i];
      out << " " << format_double(c.x) << " " << format_double(c.y);
    }
    out << "\n";
  }
  if (inst.euclidean()) {
    out << "costs euclidean\n";
    return;
  }
  out << "costs matrix\n";
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) out << (j ? " " : "") << format_double(inst.cost(PointId(i), PointId(j)));
    out << "\n";
  }
}

Instance load_instance(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::io, "cannot open instance file " + path.string());
  return parse_instance(in);
}

void save_instance(const Instance& inst, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorKind::io, "cannot write instance file " + path.string());
  write_instance(inst, out);
  if (!out) throw Error(ErrorKind::io, "write failed for " + path.string());
}

}  // namespace msr::cli
