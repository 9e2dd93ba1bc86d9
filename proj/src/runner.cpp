#include <atomic>
#include <cmath>
#include <cstdio>
#include <exception>
#include <functional>
#include <mutex>
#include <optional>
#include <random>
#include <thread>

#include "exptract/runner.hpp"

namespace exptract {

namespace {

// Runs fn(0..n-1) on up to `threads` workers. Results go to caller-owned
// slots, so output order never depends on scheduling.
void parallel_for(std::size_t n, unsigned threads, const std::function<void(std::size_t)>& fn) {
  const unsigned workers = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(n)));
  if (workers <= 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mu;
  std::vector<std::thread> pool;
  for (unsigned w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (std::size_t i; (i = next.fetch_add(1)) < n;) {
        try {
          fn(i);
        } catch (...) {
          std::lock_guard lock(failure_mu);
          if (!failure) failure = std::current_exception();
        }
      }
    });
  }
  for (auto& t : pool) t.join();
  if (failure) std::rethrow_exception(failure);
}

nlohmann::json real_cell(double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  if (std::isnan(v)) return "nan";
  return v;
}

bool is_budget_error(ErrorCode c) {
  return c == ErrorCode::BudgetExceeded || c == ErrorCode::NonCompact || c == ErrorCode::GuardExceeded;
}

void require_queries(const RunConfig& cfg) {
  if (cfg.e_grid.empty() || cfg.d_list.empty()) {
    throw Error(ErrorCode::ConfigError, "this command needs queries with an E grid and a d list");
  }
}

struct Cell {
  double E;
  std::uint64_t d;
};

// (E, d) pairs ordered by (d, E).
std::vector<Cell> query_cells(const RunConfig& cfg) {
  std::vector<Cell> cells;
  std::vector<std::uint64_t> ds = cfg.d_list;
  std::vector<double> es = cfg.e_grid;
  std::stable_sort(ds.begin(), ds.end());
  std::stable_sort(es.begin(), es.end());
  for (auto d : ds) {
    for (double E : es) cells.push_back({E, d});
  }
  return cells;
}

RunOutcome count_like(const RunConfig& cfg, bool sweep) {
  require_queries(cfg);
  const EigenSeq lambda = cfg.lambda();
  const WeightSeq gamma = cfg.gamma();
  const auto cells = query_cells(cfg);

  RunOutcome out;
  out.table.columns = {"E", "d", "jE", "dE", "count", "nodes", "truncated_dimension"};
  if (sweep) {
    for (const char* c : {"log_count", "sandwich_middle", "spt_ratio"}) out.table.columns.push_back(c);
  }
  out.table.columns.push_back("error");
  out.table.rows.resize(cells.size());
  std::vector<char> budget_hit(cells.size(), 0);

  parallel_for(cells.size(), cfg.threads, [&](std::size_t i) {
    const auto [E, d] = cells[i];
    auto& row = out.table.rows[i];
    row.assign(out.table.columns.size(), nullptr);
    row[0] = real_cell(E);
    row[1] = d;
    try {
      const std::uint64_t jE = j_of_eps(lambda, E, cfg.search_cap);
      // d(eps) is infinite for weights that never drop below eps^2; the
      // count in a fixed dimension is still finite.
      std::optional<std::uint64_t> dE;
      try {
        dE = d_of_eps(gamma, E, cfg.search_cap);
      } catch (const Error& e) {
        if (e.code() != ErrorCode::NonCompact) throw;
      }
      row[2] = jE;
      row[3] = dE ? nlohmann::json(*dE) : nlohmann::json("inf");
      const CountResult r = info_complexity(lambda, gamma, Query(E, d), cfg.node_budget, cfg.search_cap);
      row[4] = r.count.str();
      row[5] = r.nodes_visited;
      row[6] = r.truncated_dimension;
      if (sweep) {
        // ln(count) from the leading digits; exact enough for plotting.
        const std::string digits = r.count.str();
        const std::size_t lead = std::min<std::size_t>(digits.size(), 17);
        row[7] = real_cell(std::log(std::stod(digits.substr(0, lead))) +
                           static_cast<double>(digits.size() - lead) * std::log(10.0));
        const auto m = static_cast<unsigned>(dE ? std::min(d, *dE) : d);
        row[8] = BigCount(boost::multiprecision::pow(BigCount(jE), m)).str();
        if (E > 1.0) {
          row[9] = dE ? real_cell(static_cast<double>(*dE) * std::log(static_cast<double>(jE)) / std::log(E))
                      : nlohmann::json("inf");
        }
      }
    } catch (const Error& e) {
      row.back() = std::string(e.what());
      if (is_budget_error(e.code())) budget_hit[i] = 1;
      else throw;
    }
  });
  out.exit_code = std::any_of(budget_hit.begin(), budget_hit.end(), [](char c) { return c != 0; }) ? kExitBudget : kExitOk;
  return out;
}

std::string tuple_text(const SparseTuple& t) {
  std::string s;
  for (const auto& [k, j] : t) {
    if (!s.empty()) s += ' ';
    s += std::to_string(k) + ":" + std::to_string(j);
  }
  return s;
}

void add_report(Table& t, const std::string& suite, const AuditReport& rep) {
  for (const auto& c : rep.checks) {
    t.rows.push_back({suite, rep.instance, c.name, c.passed ? "pass" : "fail", c.lhs, c.rhs, c.note});
  }
}

void add_failure(Table& t, const std::string& suite, const std::string& instance, const Error& e) {
  t.rows.push_back({suite, instance, to_string(e.code()), "fail", "", "", e.what()});
}

}  // namespace

int exit_code_for(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::BudgetExceeded:
    case ErrorCode::NonCompact:
    case ErrorCode::GuardExceeded:
      return kExitBudget;
    default:
      return kExitConfig;
  }
}

RunOutcome run_count(const RunConfig& cfg) { return count_like(cfg, false); }

RunOutcome run_sweep(const RunConfig& cfg) { return count_like(cfg, true); }

RunOutcome run_classify(const RunConfig& cfg) {
  if (cfg.notions.empty()) throw Error(ErrorCode::ConfigError, "classify needs a notion");
  const EigenSeq lambda = cfg.lambda();
  const WeightSeq gamma = cfg.gamma();

  RunOutcome out;
  out.table.columns = {"notion", "status", "mode", "exponent", "rule", "error"};
  std::vector<nlohmann::json> verdicts(cfg.notions.size());
  std::vector<std::vector<nlohmann::json>> rows(cfg.notions.size());
  std::vector<int> codes(cfg.notions.size(), kExitOk);
  parallel_for(cfg.notions.size(), cfg.threads, [&](std::size_t i) {
    const Notion& n = cfg.notions[i];
    try {
      const Verdict v = classify(lambda, gamma, n, cfg.probe);
      verdicts[i] = v.to_json();
      rows[i] = {n.name(), to_string(v.status), to_string(v.mode),
                 v.exponent ? real_cell(*v.exponent) : nlohmann::json(), v.rule, nullptr};
    } catch (const Error& e) {
      const std::string msg = std::string(e.what());
      verdicts[i] = {{"notion", n.name()}, {"error", msg}};
      rows[i] = {n.name(), nullptr, nullptr, nullptr, nullptr, msg};
      codes[i] = exit_code_for(e.code());
    }
  });
  out.table.rows = std::move(rows);
  out.document = nlohmann::json{{"schema", kConfigSchema},
                                {"command", "classify"},
                                {"lambda", lambda.to_json()},
                                {"gamma", gamma.to_json()},
                                {"verdicts", verdicts}};
  out.exit_code = *std::max_element(codes.begin(), codes.end());
  return out;
}

RunOutcome run_topk(const RunConfig& cfg) {
  if (cfg.d_list.empty()) throw Error(ErrorCode::ConfigError, "topk needs queries.d");
  const EigenSeq lambda = cfg.lambda();
  const WeightSeq gamma = cfg.gamma();
  std::vector<std::uint64_t> ds = cfg.d_list;
  std::stable_sort(ds.begin(), ds.end());

  RunOutcome out;
  out.table.columns = {"d", "rank", "cost", "eigenvalue", "tuple", "error"};
  std::vector<std::vector<std::vector<nlohmann::json>>> parts(ds.size());
  std::vector<char> budget_hit(ds.size(), 0);
  parallel_for(ds.size(), cfg.threads, [&](std::size_t i) {
    try {
      const auto top = top_eigenpairs(lambda, gamma, ds[i], cfg.top_k);
      for (std::size_t r = 0; r < top.size(); ++r) {
        const double c = top[r].cost.value();
        parts[i].push_back({ds[i], r + 1, real_cell(c), real_cell(std::exp(-c)), tuple_text(top[r].tuple), nullptr});
      }
    } catch (const Error& e) {
      if (!is_budget_error(e.code())) throw;
      budget_hit[i] = 1;
      parts[i].push_back({ds[i], nullptr, nullptr, nullptr, nullptr, std::string(e.what())});
    }
  });
  for (auto& p : parts) {
    for (auto& row : p) out.table.rows.push_back(std::move(row));
  }
  out.exit_code = std::any_of(budget_hit.begin(), budget_hit.end(), [](char c) { return c != 0; }) ? kExitBudget : kExitOk;
  return out;
}

RunOutcome run_audit(const RunConfig& cfg) {
  RunOutcome out;
  out.table.columns = {"suite", "instance", "check", "status", "lhs", "rhs", "note"};
  Table& t = out.table;
  const auto wants = [&](const char* s) {
    return std::find(cfg.audit.suites.begin(), cfg.audit.suites.end(), s) != cfg.audit.suites.end();
  };

  if (wants("oracle")) {
    std::mt19937_64 rng(cfg.seed);
    std::vector<OracleInstance> instances;
    for (std::size_t i = 0; i < cfg.audit.oracle_instances; ++i) instances.push_back(random_oracle_instance(rng));
    std::vector<std::vector<nlohmann::json>> rows(instances.size());
    parallel_for(instances.size(), cfg.threads, [&](std::size_t i) {
      const std::string name = "random instance " + std::to_string(i);
      try {
        const AuditCheck c = oracle_check(instances[i], "oracle: info_complexity == brute_force_count");
        rows[i] = {"oracle", name, c.name, c.passed ? "pass" : "fail", c.lhs, c.rhs, c.note};
      } catch (const Error& e) {
        rows[i] = {"oracle", name, to_string(e.code()), "fail", "", "", e.what()};
      }
    });
    for (auto& r : rows) t.rows.push_back(std::move(r));
  }

  if (wants("brute_force")) {
    for (const auto& b : cfg.audit.brute_force) {
      const std::string name = "E=" + format_real(b.E) + " d=" + std::to_string(b.d) + " box=" + std::to_string(b.box);
      try {
        const EigenSeq lambda = cfg.lambda();
        const WeightSeq gamma = cfg.gamma();
        const Query q(b.E, b.d);
        const BigCount slow = brute_force_count(lambda, gamma, q, b.box);
        const BigCount fast = info_complexity(lambda, gamma, q, cfg.node_budget, cfg.search_cap).count;
        t.rows.push_back({"brute_force", name, "info_complexity == brute_force_count", fast == slow ? "pass" : "fail",
                          fast.str(), slow.str(), ""});
      } catch (const Error& e) {
        add_failure(t, "brute_force", name, e);
      }
    }
  }

  if (wants("sandwich")) {
    struct Job {
      std::string label;
      std::optional<EigenSeq> lambda;
      std::optional<WeightSeq> gamma;
      double E;
      std::uint64_t d;
    };
    std::vector<Job> jobs;
    if (cfg.audit.golden) {
      for (const auto& g : golden_families()) {
        for (auto d : g.d_list) {
          for (double E : g.e_grid) jobs.push_back({g.name, g.lambda, g.gamma, E, d});
        }
      }
    }
    if (!cfg.lambda_desc.is_null() && !cfg.e_grid.empty()) {
      try {
        const EigenSeq lambda = cfg.lambda();
        const WeightSeq gamma = cfg.gamma();
        for (const auto& [E, d] : query_cells(cfg)) jobs.push_back({"config", lambda, gamma, E, d});
      } catch (const Error& e) {
        add_failure(t, "sandwich", "config sequences", e);
      }
    }
    std::vector<std::vector<std::vector<nlohmann::json>>> parts(jobs.size());
    parallel_for(jobs.size(), cfg.threads, [&](std::size_t i) {
      const Job& job = jobs[i];
      Table local;
      try {
        AuditReport rep = check_lemma1(*job.lambda, *job.gamma, job.E, job.d, cfg.node_budget);
        rep.instance = job.label + " E=" + format_real(job.E) + " d=" + std::to_string(job.d);
        add_report(local, "sandwich", rep);
      } catch (const Error& e) {
        add_failure(local, "sandwich", job.label + " E=" + format_real(job.E) + " d=" + std::to_string(job.d), e);
      }
      parts[i] = std::move(local.rows);
    });
    for (auto& p : parts) {
      for (auto& row : p) t.rows.push_back(std::move(row));
    }
  }

  if (wants("summability")) {
    std::vector<std::uint64_t> j_grid = cfg.probe.j_grid;
    for (const auto& desc : cfg.audit.summability_families) {
      try {
        const EigenSeq seq = EigenSeq::from_json(desc);
        AuditReport rep = check_lemma2_family(seq, cfg.audit.c_list, j_grid);
        rep.instance = desc.dump();
        add_report(t, "summability", rep);
      } catch (const Error& e) {
        add_failure(t, "summability", desc.dump(), e);
      }
    }
  }

  if (wants("power_sum")) {
    std::mt19937_64 rng(cfg.seed ^ 0x9e3779b97f4a7c15ULL);
    const auto unit = [&] { return static_cast<double>(rng() >> 11) * 0x1.0p-53; };
    std::size_t failures = 0;
    std::string first_failure;
    for (std::size_t i = 0; i < cfg.audit.power_sum_draws; ++i) {
      const double s = 4.0 * (1.0 - unit());  // (0, 4]
      const std::size_t m = 1 + rng() % 8;
      std::vector<double> a(m);
      for (auto& x : a) x = rng() % 5 == 0 ? 0.0 : 10.0 * unit();
      const PowerSumSplit r = power_sum_split(s, a);
      if (!r.within) {
        if (failures++ == 0) first_failure = "s=" + format_real(s) + " alpha=" + format_real(r.alpha);
      }
    }
    t.rows.push_back({"power_sum", std::to_string(cfg.audit.power_sum_draws) + " random draws, s in (0,4], m <= 8",
                      "alpha within [min(1,m^(s-1)), max(1,m^(s-1))]", failures == 0 ? "pass" : "fail",
                      std::to_string(failures), "0", first_failure});
  }

  const bool all_pass = std::all_of(t.rows.begin(), t.rows.end(), [](const auto& r) { return r[3] == "pass"; });
  out.exit_code = all_pass ? kExitOk : kExitAudit;
  out.document = nlohmann::json{{"schema", kConfigSchema}, {"command", "audit"}, {"passed", all_pass}};
  return out;
}

std::string format_real(double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  if (std::isnan(v)) return "nan";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

namespace {

std::string csv_field(const nlohmann::json& v) {
  std::string s;
  if (v.is_null()) return s;
  if (v.is_string()) {
    s = v.get<std::string>();
  } else if (v.is_number_float()) {
    s = format_real(v.get<double>());
  } else if (v.is_boolean()) {
    s = v.get<bool>() ? "true" : "false";
  } else {
    s = v.dump();
  }
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string q = "\"";
  for (char c : s) {
    if (c == '"') q += '"';
    q += c;
  }
  return q + '"';
}

}  // namespace

void write_csv(std::ostream& out, const Table& t) {
  for (std::size_t i = 0; i < t.columns.size(); ++i) out << (i ? "," : "") << t.columns[i];
  out << '\n';
  for (const auto& row : t.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) out << (i ? "," : "") << csv_field(row[i]);
    out << '\n';
  }
}

void write_json(std::ostream& out, const Table& t) {
  auto rows = nlohmann::json::array();
  for (const auto& row : t.rows) {
    nlohmann::json obj = nlohmann::json::object();
    for (std::size_t i = 0; i < t.columns.size() && i < row.size(); ++i) obj[t.columns[i]] = row[i];
    rows.push_back(std::move(obj));
  }
  out << nlohmann::json{{"columns", t.columns}, {"rows", rows}}.dump(2) << '\n';
}

void write_outcome(std::ostream& out, const RunOutcome& r, Format f) {
  if (f == Format::Csv) {
    write_csv(out, r.table);
    return;
  }
  if (r.document && r.document->contains("verdicts")) {
    out << r.document->dump(2) << '\n';
    return;
  }
  write_json(out, r.table);
}

}  // namespace exptract
