// mixedsdp: bounds on mixed binary/ternary codes from the command line.
//
// exit codes: 0 success, 2 invalid input, 3 solver failure, 4 verification
// mismatch, 1 anything else (I/O).

#include <CLI11.hpp>

#include <algorithm>
#include <atomic>
#include <cstdio>
#include <iomanip>
#include <iostream>
#include <map>
#include <mutex>
#include <sstream>
#include <thread>

#include "mixedsdp/clique.hpp"
#include "mixedsdp/reduction_check.hpp"
#include "mixedsdp/sdpa_io.hpp"
#include "mixedsdp/solver.hpp"
#include "mixedsdp/store.hpp"
#include "mixedsdp/table.hpp"

using namespace mixedsdp;

namespace {

enum Exit { kOk = 0, kOther = 1, kInvalid = 2, kSolver = 3, kMismatch = 4 };

struct Args {
  int n2 = 0, n3 = 0, d = 0, k = 3;
  double tol = 1e-8;
  std::string emit_path;
  bool quiet = false;
  std::size_t cap = kDefaultWordCap;
  bool show_code = false;
  int trials = 50;
  int table_d = 0;
  int max_length = 9;
  int jobs = 0;
  bool replay = false;
  bool all_specs = false;
  std::string table_path = kDefaultTablePath;
  std::string output;
};

std::string fixed(double v, int digits = 8) {
  std::ostringstream out;
  out << std::setprecision(digits) << std::fixed << v;
  return out.str();
}

std::string sci(double v) {
  std::ostringstream out;
  out << std::setprecision(2) << std::scientific << v;
  return out.str();
}

// Solve and certify; the record is stored before it is returned.
BoundRecord compute_bound(const ProblemSpec& spec, double tol, ResultsStore& store) {
  const auto p = build_problem(spec);
  const auto s = solve(p, {tol});
  const auto c = certify(p, s);
  auto record = make_record(spec, s, c);
  store.append(record);
  return record;
}

int cmd_bound(const Args& a) {
  const auto spec = ProblemSpec::make(a.n2, a.n3, a.d, a.k);
  if (!a.emit_path.empty()) {
    emit_sdpa(build_problem(spec), a.emit_path);
    std::cout << "wrote " << a.emit_path << "\n";
    return kOk;
  }
  auto store = ResultsStore::open_default();
  const auto p = build_problem(spec);
  Solution s;
  try {
    s = solve(p, {a.tol});
  } catch (const IterationLimitError& e) {
    std::cerr << "error: " << e.what() << "\nlast objective " << e.last_iterate.objective
              << ", dual " << e.last_iterate.dual_objective << "\n";
    return kSolver;
  }
  CertifiedBound c;
  try {
    c = certify(p, s);
  } catch (const CertificationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    std::cout << "objective " << fixed(s.objective) << " (not certified)\n";
    return kSolver;
  }
  const auto record = make_record(spec, s, c);
  store.append(record);
  if (a.quiet) {
    std::cout << c.value << "\n";
    return kOk;
  }
  std::cout << "N(" << spec.n2 << "," << spec.n3 << "," << spec.d << ") <= " << c.value << "\n"
            << "  level k=" << spec.k << ", " << p.variable_count() << " variables, "
            << p.blocks.size() << " blocks\n"
            << "  objective " << fixed(s.objective) << ", dual " << fixed(s.dual_objective)
            << ", guard " << sci(c.guard) << "\n"
            << "  " << s.iterations << " iterations, " << fixed(s.seconds, 2) << " s\n";
  return kOk;
}

int cmd_emit(const Args& a) {
  const auto spec = ProblemSpec::make(a.n2, a.n3, a.d, a.k);
  const auto p = build_problem(spec);
  if (a.output.empty() || a.output == "-") {
    emit_sdpa(p, std::cout);
  } else {
    emit_sdpa(p, a.output);
    std::cerr << "wrote " << a.output << " (" << p.variable_count() << " variables)\n";
  }
  return kOk;
}

int cmd_oracle(const Args& a) {
  const auto spec = ProblemSpec::make(a.n2, a.n3, a.d);
  const auto code = exact_N(spec, a.cap);
  std::cout << code.size << "\n";
  if (a.show_code)
    for (const auto& w : code.words) std::cout << "  " << to_string(w) << "\n";
  return kOk;
}

int cmd_verify(const Args& a) {
  bool ok = true;
  for (int d = 1; d <= a.n2 + a.n3; ++d) {
    const auto r = verify_reduction(ProblemSpec::make(a.n2, a.n3, d), a.trials);
    std::cout << summary(r) << "\n";
    ok = ok && r.ok();
  }
  std::cout << (ok ? "pass" : "FAIL") << "\n";
  return ok ? kOk : kMismatch;
}

struct TableLine {
  ProblemSpec spec;
  std::optional<TableRow> published;
  std::optional<BoundRecord> record;
  std::string error;
  int error_code = kOk;
};

int cmd_table(const Args& a) {
  const auto rows = load_table(a.table_path);
  std::vector<TableLine> lines;
  auto add = [&](int n2, int n3, int d, std::optional<TableRow> published) {
    TableLine l;
    l.spec = ProblemSpec{n2, n3, d, a.k};
    l.published = std::move(published);
    lines.push_back(std::move(l));
  };
  if (a.all_specs) {
    for (int n = 2; n <= a.max_length; ++n)
      for (int n2 = 1; n2 < n; ++n2)
        for (int d = 1; d <= n; ++d)
          if (a.table_d == 0 || d == a.table_d)
            add(n2, n - n2, d, find_row(rows, n2, n - n2, d));
  } else {
    for (const auto& r : rows)
      if (r.n2 + r.n3 <= a.max_length && (a.table_d == 0 || r.d == a.table_d))
        add(r.n2, r.n3, r.d, r);
  }
  std::sort(lines.begin(), lines.end(), [](const TableLine& x, const TableLine& y) {
    return std::tuple{x.spec.d, x.spec.n2, x.spec.n3} < std::tuple{y.spec.d, y.spec.n2, y.spec.n3};
  });

  auto store = ResultsStore::open_default();
  if (a.replay) {
    const auto stored = store.latest_all();
    for (auto& l : lines) {
      auto it = stored.find(key_of(l.spec));
      if (it != stored.end()) l.record = it->second;
    }
  } else {
    const unsigned jobs =
        a.jobs > 0 ? a.jobs : std::max(1u, std::thread::hardware_concurrency());
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
      for (std::size_t i = next++; i < lines.size(); i = next++) {
        auto& l = lines[i];
        try {
          l.record = compute_bound(l.spec, a.tol, store);
        } catch (const SolverError& e) {
          l.error = e.what();
          l.error_code = kSolver;
        }
      }
    };
    std::vector<std::thread> pool;
    for (unsigned t = 0; t < std::min<std::size_t>(jobs, lines.size()); ++t) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }

  int status = kOk;
  std::printf("%4s %4s %4s %10s %10s %10s  %s\n", "n2", "n3", "d", "computed", "published", "previous",
              "status");
  for (const auto& l : lines) {
    std::string computed = "-", published = "-", previous = "-", note;
    if (l.record) computed = std::to_string(l.record->certified_bound);
    if (l.published) {
      published = std::to_string(l.published->new_upper);
      previous = std::to_string(l.published->previous_upper);
    }
    if (!l.error.empty()) {
      note = "solver failed: " + l.error;
      status = std::max(status, l.error_code);
    } else if (!l.record) {
      note = "not in store";
    } else if (!l.published) {
      note = "";
    } else if (!l.published->mark.empty()) {
      note = l.published->mark == "k4" ? "published value from level 4" : "published value from doubling";
      if (l.record->certified_bound <= l.published->new_upper) note += ", match";
    } else if (l.record->certified_bound == l.published->new_upper) {
      note = "match";
    } else {
      note = "MISMATCH";
      status = std::max(status, static_cast<int>(kMismatch));
    }
    std::printf("%4d %4d %4d %10s %10s %10s  %s\n", l.spec.n2, l.spec.n3, l.spec.d,
                computed.c_str(), published.c_str(), previous.c_str(), note.c_str());
  }

  std::printf("\nfrom N(n2+1,n3,d) <= 2 N(n2,n3,d):\n");
  for (const auto& r : doubling_rows(rows)) {
    if (a.table_d != 0 && r.target.d != a.table_d) continue;
    std::printf("  (%d,%d,%d) <= 2 * %lld = %lld", r.target.n2, r.target.n3, r.target.d,
                r.source_bound, r.derived);
    if (r.published)
      std::printf("  published %lld, %s", *r.published, *r.published == r.derived ? "match" : "MISMATCH");
    std::printf("\n");
    if (r.published && *r.published != r.derived) status = std::max(status, static_cast<int>(kMismatch));
  }
  return status;
}

void add_spec(CLI::App* app, Args& a, bool with_d = true) {
  app->add_option("n2", a.n2, "binary coordinates")->required();
  app->add_option("n3", a.n3, "ternary coordinates")->required();
  if (with_d) app->add_option("d", a.d, "minimum distance")->required();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Semidefinite programming bounds for mixed binary/ternary codes"};
  app.require_subcommand(1);
  Args a;

  auto* bound = app.add_subcommand("bound", "certified upper bound from the SDP (or LP for --k 2)");
  add_spec(bound, a);
  bound->add_option("--k", a.k, "hierarchy level")->check(CLI::IsMember({2, 3}));
  bound->add_option("--tol", a.tol, "solver tolerance")->check(CLI::PositiveNumber);
  bound->add_option("--emit-only", a.emit_path, "write the SDPA file and stop");
  bound->add_flag("-q,--quiet", a.quiet, "print only the bound");

  auto* emit = app.add_subcommand("emit", "write the problem in SDPA sparse format");
  add_spec(emit, a);
  emit->add_option("output", a.output, "output file, - for stdout");
  emit->add_option("--k", a.k, "hierarchy level")->check(CLI::IsMember({2, 3}));

  auto* oracle = app.add_subcommand("oracle", "exact N(n2,n3,d) by maximum clique search");
  add_spec(oracle, a);
  oracle->add_option("--cap", a.cap, "largest word count to search");
  oracle->add_flag("--show-code", a.show_code, "print an optimal code");

  auto* verify = app.add_subcommand("verify", "check the block reduction against explicit matrices");
  add_spec(verify, a, false);
  verify->add_option("--trials", a.trials, "random points for the eigenvalue check");

  auto* table = app.add_subcommand("table", "compare computed bounds with the published table");
  table->add_option("--d", a.table_d, "only this distance");
  table->add_option("--max-length", a.max_length, "largest n2 + n3")->check(CLI::Range(2, 20));
  table->add_option("--k", a.k, "hierarchy level")->check(CLI::IsMember({2, 3}));
  table->add_option("--tol", a.tol, "solver tolerance")->check(CLI::PositiveNumber);
  table->add_option("--jobs", a.jobs, "parallel solves (default: all cores)");
  table->add_flag("--replay", a.replay, "print from the results store without solving");
  table->add_flag("--all", a.all_specs, "every spec in range, not only table rows");
  table->add_option("--table", a.table_path, "table file");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kInvalid;
  }

  try {
    if (*bound) return cmd_bound(a);
    if (*emit) return cmd_emit(a);
    if (*oracle) return cmd_oracle(a);
    if (*verify) return cmd_verify(a);
    if (*table) return cmd_table(a);
  } catch (const ShapeError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kInvalid;
  } catch (const DomainError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kInvalid;
  } catch (const ResourceError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kInvalid;
  } catch (const ParseError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kInvalid;
  } catch (const SolverError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kSolver;
  } catch (const VerificationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kMismatch;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kOther;
  }
  return kOther;
}
