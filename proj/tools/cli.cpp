#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <future>
#include <iostream>
#include <memory>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "bracketdyn/dyck_dynamic.hpp"
#include "bracketdyn/dyck_exact_k.hpp"
#include "bracketdyn/dyck_reduction.hpp"
#include "bracketdyn/height_forest.hpp"
#include "bracketdyn/oracles.hpp"
#include "bracketdyn/ted_k_gap.hpp"
#include "bracketdyn/tree_align.hpp"

using namespace bracketdyn;
using nlohmann::json;
using oracle::EditCosts;

namespace {

constexpr int kExitTripwire = 1;
constexpr int kExitInput = 2;

// Malformed input; line is 1-based, 0 when not tied to a line.
struct InputError {
  std::size_t line = 0;
  std::string what;
};

// Invariant tripwire hit during a run.
struct Tripwire {
  std::string what;
};

std::string read_file(const std::string& path) {
  if (path == "-") {
    std::stringstream ss;
    ss << std::cin.rdbuf();
    return ss.str();
  }
  std::ifstream in(path);
  if (!in) throw InputError{0, "cannot open " + path};
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::vector<std::string> nonempty_lines(const std::string& text, std::vector<std::size_t>* numbers = nullptr) {
  std::vector<std::string> out;
  std::istringstream in(text);
  std::string line;
  for (std::size_t no = 1; std::getline(in, line); ++no) {
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    out.push_back(line);
    if (numbers) numbers->push_back(no);
  }
  return out;
}

std::uint64_t default_seed() {
  if (const char* s = std::getenv("BRACKETDYN_SEED")) return std::strtoull(s, nullptr, 10);
  return 20240611;
}

double lg(double v) { return std::log2(v); }

void emit(const json& j) { std::cout << j.dump() << '\n'; }

// ---- edit streams ----

struct Record {
  std::size_t line = 0;
  json j;
};

std::vector<Record> read_stream(const std::string& path) {
  std::vector<std::size_t> numbers;
  auto lines = nonempty_lines(read_file(path), &numbers);
  std::vector<Record> out;
  for (std::size_t i = 0; i < lines.size(); ++i) {
    json j;
    try {
      j = json::parse(lines[i]);
    } catch (const json::parse_error& e) {
      throw InputError{numbers[i], std::string("invalid JSON: ") + e.what()};
    }
    if (!j.is_object() || !j.contains("op") || !j["op"].is_string()) {
      throw InputError{numbers[i], "record needs a string \"op\""};
    }
    out.push_back({numbers[i], std::move(j)});
  }
  return out;
}

template <class T>
T field(const Record& r, const char* name) {
  if (!r.j.contains(name)) throw InputError{r.line, std::string("missing \"") + name + "\""};
  try {
    return r.j.at(name).get<T>();
  } catch (const json::exception&) {
    throw InputError{r.line, std::string("bad type for \"") + name + "\""};
  }
}

Paren parse_sym(const Record& r) {
  auto s = field<std::string>(r, "sym");
  ParenString p;
  try {
    p = parse_parens(s);
  } catch (const ParseError& e) {
    throw InputError{r.line, std::string("bad symbol: ") + e.what()};
  }
  if (p.size() != 1) throw InputError{r.line, "\"sym\" must be exactly one parenthesis"};
  return p[0];
}

ParenString parse_text(const Record& r) {
  try {
    return parse_parens(field<std::string>(r, "text"));
  } catch (const ParseError& e) {
    throw InputError{r.line, std::string("bad string: ") + e.what()};
  }
}

// A string stream: an optional init record followed by character edits.
struct StringStream {
  ParenString init;
  std::vector<std::pair<std::size_t, CharEdit>> edits;  // line, edit
};

StringStream read_string_stream(const std::string& path) {
  StringStream s;
  auto recs = read_stream(path);
  std::size_t n = 0;
  for (std::size_t i = 0; i < recs.size(); ++i) {
    const Record& r = recs[i];
    auto op = r.j["op"].get<std::string>();
    if (op == "init") {
      if (i != 0) throw InputError{r.line, "init must be the first record"};
      s.init = parse_text(r);
      n = s.init.size();
      continue;
    }
    auto pos = field<std::int64_t>(r, "pos");
    if (pos < 0) throw InputError{r.line, "negative position"};
    auto p = static_cast<std::size_t>(pos);
    CharEdit e;
    if (op == "ins") {
      if (p > n) throw InputError{r.line, "insert position past the end"};
      e = CharEdit::insert_at(p, parse_sym(r));
      ++n;
    } else if (op == "del") {
      if (p >= n) throw InputError{r.line, "delete position past the end"};
      e = CharEdit::erase_at(p);
      --n;
    } else if (op == "sub") {
      if (p >= n) throw InputError{r.line, "substitute position past the end"};
      e = CharEdit::substitute_at(p, parse_sym(r));
    } else {
      throw InputError{r.line, "unknown op \"" + op + "\""};
    }
    s.edits.push_back({r.line, e});
  }
  return s;
}

// A forest stream: init records for F and G, then node edits.
struct ForestStream {
  LabelTable labels;
  PlainForest init[2];
  std::vector<std::pair<std::size_t, SideEdit>> edits;
};

int parse_side(const Record& r) {
  auto s = field<std::string>(r, "side");
  if (s == "F") return 0;
  if (s == "G") return 1;
  throw InputError{r.line, "\"side\" must be \"F\" or \"G\""};
}

ForestStream read_forest_stream(const std::string& path) {
  ForestStream s;
  auto recs = read_stream(path);
  Forest sim[2];
  bool edited = false;
  for (const Record& r : recs) {
    auto op = r.j["op"].get<std::string>();
    int side = parse_side(r);
    if (op == "init") {
      if (edited) throw InputError{r.line, "init must precede node edits"};
      try {
        s.init[side] = parse_forest(field<std::string>(r, "text"), s.labels);
      } catch (const ParseError& e) {
        throw InputError{r.line, std::string("bad forest: ") + e.what()};
      }
      sim[side] = Forest(s.init[side]);
      continue;
    }
    edited = true;
    Forest& f = sim[side];
    NodeEdit e;
    if (op == "nins") {
      int parent = r.j.contains("parent") ? field<int>(r, "parent") : -1;
      if (parent != -1 && !f.alive(parent)) throw InputError{r.line, "no live node " + std::to_string(parent)};
      std::size_t m = f.children(parent).size();
      auto first = r.j.contains("first") ? field<std::size_t>(r, "first") : m;
      auto last = r.j.contains("last") ? field<std::size_t>(r, "last") : first;
      if (first > last || last > m) throw InputError{r.line, "adopted children out of range"};
      e = NodeEdit::insert_under(parent, first, last, s.labels.intern(field<std::string>(r, "label")));
    } else if (op == "ndel" || op == "nrel") {
      int v = field<int>(r, "node");
      if (!f.alive(v)) throw InputError{r.line, "no live node " + std::to_string(v)};
      e = op == "ndel" ? NodeEdit::erase_node(v)
                       : NodeEdit::relabel_node(v, s.labels.intern(field<std::string>(r, "label")));
    } else {
      throw InputError{r.line, "unknown op \"" + op + "\""};
    }
    f.apply(e);
    s.edits.push_back({r.line, {side, e}});
  }
  return s;
}

// ---- subcommands ----

struct ApproxArgs {
  std::string file = "-";
  std::string strategy = "heavy";
  std::string backend = "dp";
  std::string mode = "indel";
  std::string trace;
  bool oracle = false;
  bool timing = false;
};

int run_dyck_approx(const ApproxArgs& a) {
  auto s = read_string_stream(a.file);
  EdMode mode = a.mode == "full" ? EdMode::full : EdMode::indel;
  Strategy strategy = parse_strategy(a.strategy);
  DyckSession session(s.init, strategy, make_backend(a.backend), mode);
  ParenString x = s.init;
  std::unique_ptr<HeightForest> trace_forest;
  std::ofstream trace;
  if (!a.trace.empty()) {
    trace.open(a.trace);
    if (!trace) throw InputError{0, "cannot write " + a.trace};
    trace_forest = std::make_unique<HeightForest>(s.init);
  }
  auto distance = [&](const ParenString& y) {
    if (y.size() > oracle::kDedCap) throw InputError{0, "--oracle is limited to strings of " +
                                                            std::to_string(oracle::kDedCap) + " characters"};
    return oracle::ded_exact(y, mode == EdMode::full ? EditCosts::full() : EditCosts::deletion_only());
  };
  double max_ratio = 0, micros = 0;
  std::size_t steps = 0, cost = 0;
  std::optional<std::string> tripped;
  for (auto& [line, e] : s.edits) {
    apply_edit(x, e);
    auto before = session.counters();
    auto t0 = std::chrono::steady_clock::now();
    std::size_t est = session.apply(e);
    micros += std::chrono::duration<double, std::micro>(std::chrono::steady_clock::now() - t0).count();
    const auto& c = session.counters();
    cost += (c.backend_calls - before.backend_calls) + c.last_delta;
    json rec{{"step", ++steps},
             {"estimate", est},
             {"counters", {{"backend_calls", c.backend_calls}, {"deltas", c.last_delta}, {"steps", c.last_recomputed}}}};
    if (trace_forest) trace << to_jsonl(trace_forest->apply_edit(e));
    if (a.oracle) {
      std::size_t d = distance(x);
      rec["true"] = d;
      double n = static_cast<double>(std::max<std::size_t>(x.size(), 1));
      double limit = strategy == Strategy::heavy
                         ? 8 * (lg(n) + 1)
                         : 8 * (3 + 2 * lg(static_cast<double>(std::max<std::size_t>(est, 2))));
      if (d == 0) {
        rec["ratio"] = est == 0 ? json(1.0) : json(nullptr);
        if (est != 0 && !tripped) tripped = "line " + std::to_string(line) + ": nonzero estimate on a Dyck string";
      } else {
        double r = static_cast<double>(est) / static_cast<double>(d);
        rec["ratio"] = r;
        max_ratio = std::max(max_ratio, r);
        if ((r < 1 || r > limit) && !tripped) {
          tripped = "line " + std::to_string(line) + ": ratio " + std::to_string(r) + " outside [1, " +
                    std::to_string(limit) + "]";
        }
      }
    }
    emit(rec);
  }
  json sum{{"steps", steps}, {"n", x.size()}, {"estimate", session.estimate()},
           {"mean_update_cost", steps ? static_cast<double>(cost) / static_cast<double>(steps) : 0.0}};
  if (a.oracle) sum["max_ratio"] = max_ratio;
  if (a.timing) sum["mean_update_us"] = steps ? micros / static_cast<double>(steps) : 0.0;
  emit({{"summary", sum}});
  if (tripped) throw Tripwire{*tripped};
  return 0;
}

int run_dyck_exact(const std::string& file, std::size_t k_max, bool use_oracle) {
  auto s = read_string_stream(file);
  ExactKSession session(s.init, k_max);
  ParenString x = s.init;
  std::size_t steps = 0;
  std::optional<std::string> tripped;
  auto report = [&](std::optional<std::size_t> v, std::size_t line) {
    json rec{{"step", steps}, {"value", v ? json(*v) : json(nullptr)},
             {"counters", {{"solves", session.solves()}, {"k", session.last_stats().k}}}};
    if (use_oracle) {
      if (x.size() > oracle::kDedCap) throw InputError{line, "--oracle is limited to strings of " +
                                                                 std::to_string(oracle::kDedCap) + " characters"};
      std::size_t d = oracle::ded_exact(x, EditCosts::full());
      rec["true"] = d;
      bool ok = v ? *v == d : d > k_max;
      if (!ok && !tripped) tripped = "line " + std::to_string(line) + ": value differs from the oracle";
    }
    emit(rec);
  };
  report(session.value(), 0);
  for (auto& [line, e] : s.edits) {
    apply_edit(x, e);
    auto v = session.apply(e);
    ++steps;
    report(v, line);
  }
  emit({{"summary", {{"steps", steps}, {"n", x.size()}, {"solves", session.solves()}}}});
  if (tripped) throw Tripwire{*tripped};
  return 0;
}

ParenString read_paren_fixture(const std::string& file) {
  auto lines = nonempty_lines(read_file(file));
  if (lines.size() != 1) throw InputError{0, "expected one line with a parenthesis string"};
  try {
    return parse_parens(lines[0]);
  } catch (const ParseError& e) {
    throw InputError{1, std::string("bad string: ") + e.what()};
  }
}

int run_dyck_reduce(const std::string& file, bool as_json) {
  ParenString x = read_paren_fixture(file);
  if (x.size() > oracle::kDedCap) throw InputError{0, "string longer than the oracle cap"};
  auto c = build_collection(x);
  DpBackend dp;
  // ed_lr is the indel distance between the openers and the transposed closers.
  auto row = [&](const ParenString& m, const char* kind) {
    auto split = m.begin() + static_cast<std::ptrdiff_t>(lmp(m));
    ParenString l(m.begin(), split);
    ParenString r = transpose(ParenString(split, m.end()));
    std::size_t d = oracle::ded_exact(m, EditCosts::deletion_only());
    std::size_t e = oracle::ed_exact(l, r, EditCosts::deletion_only());
    return json{{"kind", kind}, {"member", format_parens(m)}, {"length", m.size()}, {"ded_d", d}, {"ed_lr", e}};
  };
  std::vector<json> rows;
  for (const auto& m : c.members) rows.push_back(row(m, "member"));
  for (const auto& m : c.monotone) rows.push_back(row(m, "monotone"));
  std::size_t est = estimate_from_collection(c, dp, EdMode::indel);
  if (as_json) {
    emit({{"members", rows}, {"rounds", c.rounds}, {"estimate", est}});
    return 0;
  }
  std::printf("%-10s %-32s %7s %7s %7s\n", "kind", "member", "length", "ded_d", "ed_lr");
  for (const auto& r : rows) {
    std::printf("%-10s %-32s %7zu %7zu %7zu\n", r["kind"].get<std::string>().c_str(),
                r["member"].get<std::string>().c_str(), r["length"].get<std::size_t>(), r["ded_d"].get<std::size_t>(),
                r["ed_lr"].get<std::size_t>());
  }
  std::printf("rounds %zu, estimate %zu\n", c.rounds, est);
  return 0;
}

std::size_t oracle_ted(const PlainForest& f, const PlainForest& g) {
  if (f.size() > oracle::kTedCap || g.size() > oracle::kTedCap) {
    throw InputError{0, "--oracle is limited to forests of " + std::to_string(oracle::kTedCap) + " nodes"};
  }
  return oracle::ted_exact(f, g);
}

int run_ted_kgap(const std::string& file, std::size_t k, double factor, bool use_oracle) {
  auto s = read_forest_stream(file);
  ForestPair d(s.init[0], s.init[1]);
  for (auto& [line, e] : s.edits) d.apply(e.side, e.edit);
  GapOptions opt;
  opt.budget_factor = factor;
  GapResult r = gap_query(d, k, opt);
  json out{{"k", k},
           {"answer", r.yes ? "yes" : "no"},
           {"size_guard", r.size_guard},
           {"budget", r.budget},
           {"iterations", r.iterations},
           {"pieces", r.pieces}};
  if (r.yes) {
    out["certificate_cost"] = r.certificate_cost;
    out["certificate_bound"] = r.certificate_bound;
    out["certificate_valid"] = r.certificate_valid;
  }
  std::optional<std::string> tripped;
  if (r.yes && !(r.certificate_valid && r.certificate_cost <= r.certificate_bound)) {
    tripped = "certificate fails its checks";
  }
  if (use_oracle) {
    std::size_t t = oracle_ted(d.f().to_plain(), d.g().to_plain());
    out["true"] = t;
    if (r.yes && t > r.certificate_cost && !tripped) tripped = "certificate cheaper than the exact distance";
  }
  emit(out);
  if (tripped) throw Tripwire{*tripped};
  return 0;
}

int run_ted_dyn(const std::string& file, double factor, bool use_oracle) {
  auto s = read_forest_stream(file);
  SessionOptions opt;
  opt.budget_factor = factor;
  GapSession session(s.init[0], s.init[1], opt);
  std::size_t steps = 0;
  double max_ratio = 0;
  std::optional<std::string> tripped;
  for (auto& [line, e] : s.edits) {
    double est = session.update(e);
    json rec{{"step", ++steps},
             {"estimate", est},
             {"kappa", session.kappa()},
             {"counters",
              {{"staleness", session.staleness()},
               {"buffered", session.buffered()},
               {"queries", session.completed_queries()},
               {"steps", session.last_query_steps()}}}};
    if (use_oracle) {
      const ForestPair& c = session.current();
      auto t = static_cast<double>(oracle_ted(c.f().to_plain(), c.g().to_plain()));
      double l = gap_lg(std::max(c.f().size(), c.g().size()));
      rec["true"] = static_cast<std::size_t>(t);
      if (t > 0) {
        rec["ratio"] = est / t;
        max_ratio = std::max(max_ratio, est / t);
      }
      bool ok = t <= est && est <= 25 * GapSession::kCert * t * t * l + 1.25 * t;
      if (!ok && !tripped) tripped = "line " + std::to_string(line) + ": estimate outside the envelope";
    }
    emit(rec);
  }
  json sum{{"steps", steps}, {"estimate", session.estimate()}, {"queries", session.completed_queries()}};
  if (use_oracle) sum["max_ratio"] = max_ratio;
  emit({{"summary", sum}});
  if (tripped) throw Tripwire{*tripped};
  return 0;
}

std::pair<PlainForest, PlainForest> read_forest_pair(const std::string& file, LabelTable& labels) {
  auto lines = nonempty_lines(read_file(file));
  if (lines.size() != 2) throw InputError{0, "expected two lines, one forest each"};
  PlainForest out[2];
  for (int i = 0; i < 2; ++i) {
    try {
      out[i] = parse_forest(lines[i], labels);
    } catch (const ParseError& e) {
      throw InputError{static_cast<std::size_t>(i + 1), std::string("bad forest: ") + e.what()};
    }
  }
  return {out[0], out[1]};
}

int run_ted_sqrt(const std::string& file, bool use_oracle) {
  LabelTable labels;
  auto [f, g] = read_forest_pair(file, labels);
  auto r = static_sqrt_pipeline(f, g);
  json out{{"ed", r.ed}, {"ed_deletion", r.ed_deletion}, {"repaired_cost", r.repaired_cost}, {"ted_upper", r.ted_upper}};
  if (use_oracle) {
    std::size_t t = oracle_ted(f, g);
    out["ted"] = t;
    if (t > 0) {
      out["upper_ratio"] = static_cast<double>(r.ted_upper) / static_cast<double>(t);
      out["ed_ratio"] = static_cast<double>(r.ed) / static_cast<double>(t);
    }
    emit(out);
    if (t > r.ted_upper) throw Tripwire{"upper bound below the exact distance"};
    return 0;
  }
  emit(out);
  return 0;
}

std::string run_oracle_one(const std::string& what, const std::string& file) {
  if (what == "ded" || what == "ded-d") {
    ParenString x = read_paren_fixture(file);
    if (x.size() > oracle::kDedCap) throw InputError{0, "string longer than the oracle cap"};
    return std::to_string(oracle::ded_exact(x, what == "ded" ? EditCosts::full() : EditCosts::deletion_only()));
  }
  if (what == "ed" || what == "ed-indel") {
    auto lines = nonempty_lines(read_file(file));
    if (lines.size() != 2) throw InputError{0, "expected two lines, one string each"};
    ParenString x, y;
    try {
      x = parse_parens(lines[0]);
      y = parse_parens(lines[1]);
    } catch (const ParseError& e) {
      throw InputError{0, std::string("bad string: ") + e.what()};
    }
    if (x.size() > oracle::kEdCap || y.size() > oracle::kEdCap) throw InputError{0, "string longer than the oracle cap"};
    return std::to_string(oracle::ed_exact(x, y, what == "ed" ? EditCosts::full() : EditCosts::deletion_only()));
  }
  if (what == "ted") {
    LabelTable labels;
    auto [f, g] = read_forest_pair(file, labels);
    return std::to_string(oracle_ted(f, g));
  }
  throw InputError{0, "unknown oracle \"" + what + "\""};
}

int run_oracle(const std::string& what, const std::vector<std::string>& files, unsigned jobs) {
  std::vector<std::string> out(files.size());
  std::vector<std::optional<InputError>> errs(files.size());
  auto work = [&](std::size_t i) {
    try {
      out[i] = run_oracle_one(what, files[i]);
    } catch (const InputError& e) {
      errs[i] = e;
    }
  };
  for (std::size_t start = 0; start < files.size(); start += std::max(jobs, 1u)) {
    std::vector<std::future<void>> batch;
    for (std::size_t i = start; i < std::min(files.size(), start + std::max(jobs, 1u)); ++i) {
      batch.push_back(std::async(jobs > 1 ? std::launch::async : std::launch::deferred, work, i));
    }
    for (auto& b : batch) b.get();
  }
  for (std::size_t i = 0; i < files.size(); ++i) {
    if (errs[i]) {
      InputError e = *errs[i];
      e.what = files[i] + ": " + e.what;
      throw e;
    }
    if (files.size() > 1) std::cout << files[i] << ' ';
    std::cout << out[i] << '\n';
  }
  return 0;
}

// ---- generator ----

ParenString random_dyck(std::mt19937_64& rng, std::size_t pairs, int types) {
  ParenString x;
  std::vector<std::int64_t> stack;
  std::size_t opened = 0;
  while (opened < pairs || !stack.empty()) {
    if (opened < pairs && (stack.empty() || rng() % 2 == 0)) {
      auto t = static_cast<std::int64_t>(rng() % types);
      x.push_back(open_paren(t));
      stack.push_back(t);
      ++opened;
    } else {
      x.push_back(close_paren(stack.back()));
      stack.pop_back();
    }
  }
  return x;
}

std::string label_name(std::int64_t l) { return std::string(1, static_cast<char>('a' + l)); }

struct GenArgs {
  std::uint64_t seed = 0;
  std::size_t n = 100;
  std::size_t edits = 0;
  int types = 2;
  int labels = 3;
  bool forest = false;
};

int run_gen(const GenArgs& a) {
  std::mt19937_64 rng(a.seed);
  std::size_t edits = a.edits ? a.edits : a.n;
  auto sym = [&]() {
    Paren p{(rng() & 1) ? Kind::close : Kind::open, static_cast<std::int64_t>(rng() % a.types)};
    return format_parens(ParenString{p});
  };
  if (!a.forest) {
    ParenString x = random_dyck(rng, a.n / 2, a.types);
    if (x.size() < a.n) x.push_back(open_paren(0));
    emit({{"op", "init"}, {"text", format_parens(x)}});
    std::size_t n = x.size();
    for (std::size_t i = 0; i < edits; ++i) {
      int op = n == 0 ? 0 : static_cast<int>(rng() % 3);
      if (op == 0) {
        emit({{"op", "ins"}, {"pos", rng() % (n + 1)}, {"sym", sym()}});
        ++n;
      } else if (op == 1) {
        emit({{"op", "del"}, {"pos", rng() % n}});
        --n;
      } else {
        emit({{"op", "sub"}, {"pos", rng() % n}, {"sym", sym()}});
      }
    }
    return 0;
  }
  LabelTable names;
  for (int l = 0; l < a.labels; ++l) names.intern(label_name(l));
  ParenString shape = random_dyck(rng, a.n, 1);
  PlainForest pf = PlainForest::from_parens(shape);
  for (auto& l : pf.label) l = static_cast<std::int64_t>(rng() % a.labels);
  std::string text = format_forest(pf, names);
  emit({{"op", "init"}, {"side", "F"}, {"text", text}});
  emit({{"op", "init"}, {"side", "G"}, {"text", text}});
  Forest sim[2] = {Forest(pf), Forest(pf)};
  for (std::size_t i = 0; i < edits; ++i) {
    int side = static_cast<int>(rng() % 2);
    Forest& f = sim[side];
    std::vector<int> ids;
    f.to_plain(&ids);
    int op = ids.empty() ? 0 : static_cast<int>(rng() % 3);
    auto label = static_cast<std::int64_t>(rng() % a.labels);
    const char* sname = side == 0 ? "F" : "G";
    if (op == 0) {
      int p = static_cast<int>(rng() % (ids.size() + 1)) - 1;
      if (p >= 0) p = ids[p];
      std::size_t m = f.children(p).size();
      std::size_t first = rng() % (m + 1);
      std::size_t last = first + rng() % (m - first + 1);
      f.apply(NodeEdit::insert_under(p, first, last, label));
      emit({{"op", "nins"}, {"side", sname}, {"parent", p}, {"first", first}, {"last", last}, {"label", label_name(label)}});
    } else {
      int v = ids[rng() % ids.size()];
      if (op == 1) {
        f.apply(NodeEdit::erase_node(v));
        emit({{"op", "ndel"}, {"side", sname}, {"node", v}});
      } else {
        f.apply(NodeEdit::relabel_node(v, label));
        emit({{"op", "nrel"}, {"side", sname}, {"node", v}, {"label", label_name(label)}});
      }
    }
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Dynamic Dyck and tree edit distance tools"};
  app.require_subcommand(1);
  std::function<int()> action;

  ApproxArgs approx;
  auto* da = app.add_subcommand("dyck-approx", "Approximate Dyck edit distance over an edit stream");
  da->add_option("file", approx.file, "JSONL edit stream ('-' for stdin)");
  da->add_option("--strategy", approx.strategy)->check(CLI::IsMember({"heavy", "large", "small", "combined"}));
  da->add_option("--backend", approx.backend)->check(CLI::IsMember({"dp", "bounded-k"}));
  da->add_option("--mode", approx.mode)->check(CLI::IsMember({"indel", "full"}));
  da->add_option("--trace", approx.trace, "Write heavy string deltas as JSONL");
  da->add_flag("--oracle", approx.oracle, "Compare with the exact distance");
  da->add_flag("--timing", approx.timing, "Report mean wall time per update");
  da->callback([&] { action = [&] { return run_dyck_approx(approx); }; });

  std::string file = "-";
  std::size_t k_max = SIZE_MAX, k = 0;
  bool use_oracle = false, as_json = false;
  double factor = 1.0;
  auto* de = app.add_subcommand("dyck-exact", "Exact Dyck edit distance over an edit stream");
  de->add_option("file", file);
  de->add_option("--k-max", k_max, "Largest distance computed");
  de->add_flag("--oracle", use_oracle);
  de->callback([&] { action = [&] { return run_dyck_exact(file, k_max, use_oracle); }; });

  auto* dr = app.add_subcommand("dyck-reduce", "LR-string collection of a fixture string");
  dr->add_option("file", file);
  dr->add_flag("--json", as_json);
  dr->callback([&] { action = [&] { return run_dyck_reduce(file, as_json); }; });

  auto* tk = app.add_subcommand("ted-kgap", "Gap query ted(F, G) <= k after a node edit stream");
  tk->add_option("file", file);
  tk->add_option("--k", k)->required();
  tk->add_option("--budget-factor", factor)->check(CLI::PositiveNumber);
  tk->add_flag("--oracle", use_oracle);
  tk->callback([&] { action = [&] { return run_ted_kgap(file, k, factor, use_oracle); }; });

  auto* td = app.add_subcommand("ted-dyn", "Dynamic tree edit distance estimate over a node edit stream");
  td->add_option("file", file);
  td->add_option("--budget-factor", factor)->check(CLI::PositiveNumber);
  td->add_flag("--oracle", use_oracle);
  td->callback([&] { action = [&] { return run_ted_dyn(file, factor, use_oracle); }; });

  auto* ts = app.add_subcommand("ted-sqrt", "Static tree edit distance upper bound for two forests");
  ts->add_option("file", file, "Two lines, one forest each");
  ts->add_flag("--oracle", use_oracle);
  ts->callback([&] { action = [&] { return run_ted_sqrt(file, use_oracle); }; });

  std::string what;
  std::vector<std::string> files;
  unsigned jobs = 1;
  auto* orc = app.add_subcommand("oracle", "Exact distances on fixture files");
  orc->add_option("what", what)->required()->check(CLI::IsMember({"ded", "ded-d", "ed", "ed-indel", "ted"}));
  orc->add_option("files", files)->required();
  orc->add_option("--jobs", jobs)->check(CLI::PositiveNumber);
  orc->callback([&] { action = [&] { return run_oracle(what, files, jobs); }; });

  GenArgs gen;
  gen.seed = default_seed();
  auto* gn = app.add_subcommand("gen", "Random edit stream");
  gn->add_option("--seed", gen.seed);
  gn->add_option("--n", gen.n, "Initial length (string) or node count (forest)");
  gn->add_option("--edits", gen.edits, "Number of edits, default n");
  gn->add_option("--types", gen.types)->check(CLI::Range(1, 1000));
  gn->add_option("--labels", gen.labels)->check(CLI::Range(1, 26));
  gn->add_flag("--forest", gen.forest, "Two-sided node edit stream");
  gn->callback([&] { action = [&] { return run_gen(gen); }; });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : kExitInput;
  }
  try {
    return action();
  } catch (const InputError& e) {
    std::cerr << "error: " << (e.line ? "line " + std::to_string(e.line) + ": " : "") << e.what << '\n';
    return kExitInput;
  } catch (const Tripwire& t) {
    std::cout.flush();
    std::cerr << "tripwire: " << t.what << '\n';
    return kExitTripwire;
  }
}
