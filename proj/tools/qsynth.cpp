// qsynth: command-line front end for synthesis, verification and batch runs.
#include <fcntl.h>
#include <sys/wait.h>
#include <unistd.h>

#include <algorithm>
#include <chrono>
#include <csignal>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "qsynth/encoding.hpp"
#include "qsynth/error.hpp"
#include "qsynth/esop.hpp"
#include "qsynth/funcprep.hpp"
#include "qsynth/grover.hpp"
#include "qsynth/optimize.hpp"
#include "qsynth/pla.hpp"
#include "qsynth/qasm.hpp"
#include "qsynth/simulate.hpp"
#include "qsynth/stats.hpp"
#include "qsynth/tbs.hpp"

namespace fs = std::filesystem;
using json = nlohmann::ordered_json;
using namespace qsynth;

namespace {

constexpr int kSchemaVersion = 1;

enum Exit : int {
  kOk = 0,
  kInternal = 1,
  kUsage = 2,
  kParse = 3,
  kSynthesis = 4,
  kVerifyFailed = 5,
  kTimeout = 6,
};

const std::vector<std::string> kMethods = {"esop", "tbs", "tbs-rm", "basis", "angle", "improved-angle", "amplitude"};
const std::vector<std::string> kPasses = {"double-x", "mcx-ladder", "toffoli-5", "graycode",
                                          "sym-dup",  "sym-mirror", "uniform"};

int exit_for(ErrorCode code) {
  switch (code) {
    case ErrorCode::MalformedDirective:
    case ErrorCode::BadCube:
    case ErrorCode::ConflictingRows:
    case ErrorCode::UnsupportedStatement:
    case ErrorCode::EmptyInput:
      return kParse;
    default:
      return kSynthesis;
  }
}

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::size_t max_rows_from_env() {
  const char* v = std::getenv("QSYNTH_MAX_ROWS");
  if (!v || !*v) return kDefaultMaxRows;
  char* end = nullptr;
  const unsigned long long n = std::strtoull(v, &end, 10);
  if (*end != '\0' || n == 0) throw UsageError("QSYNTH_MAX_ROWS must be a positive integer");
  return static_cast<std::size_t>(n);
}

std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream in(s);
  for (std::string item; std::getline(in, item, ',');)
    if (!item.empty()) out.push_back(item);
  return out;
}

Gateset parse_gateset(const std::string& s) { return s == "uniform" ? Gateset::Uniform : Gateset::Natural; }

// A PMF comes from a file, or from a built-in name given directly or as the
// stem of a missing file ("binomial.pmf").
Pmf load_pmf(const std::string& arg, std::optional<int> qubits) {
  Pmf pmf;
  if (fs::exists(arg)) {
    pmf = read_pmf_file(arg);
  } else {
    const auto names = named_pmf_list();
    std::string name = fs::path(arg).stem().string();
    if (std::find(names.begin(), names.end(), name) == names.end())
      throw UsageError("no such PMF file or built-in distribution: " + arg);
    pmf = named_pmf(name);
  }
  if (qubits) {
    const std::size_t bins = std::size_t{1} << *qubits;
    if (pmf.p.size() > bins)
      throw UsageError("distribution has " + std::to_string(pmf.p.size()) + " bins, more than 2^" +
                       std::to_string(*qubits));
    pmf.p.resize(bins, 0.0);
  }
  return pmf;
}

// ---------------------------------------------------------------- synthesis

struct SynthJob {
  std::string input;
  std::string method = "esop";
  std::vector<std::string> passes;
  Gateset gateset = Gateset::Natural;
  std::optional<int> qubits;
  std::size_t max_rows = kDefaultMaxRows;
};

struct SynthResult {
  Circuit circuit;
  std::int64_t micros = 0;
};

Circuit tbs_circuit(const PlaTable& t, bool rm, std::size_t max_rows) {
  TruthTableOptions o;
  o.fill_absent = true;
  o.max_rows = max_rows;
  const RttResult rtt = make_one_to_one(to_truth_table(t, o), max_rows);
  const TruthTable full = make_onto(rtt.table, OntoStrategy::HammingMin, std::nullopt, max_rows);
  return rm ? synth_tbs_rm(full) : synth_tbs_basic(full);
}

SynthResult run_synth(const SynthJob& job) {
  if (std::find(kMethods.begin(), kMethods.end(), job.method) == kMethods.end())
    throw UsageError("unknown method '" + job.method + "'");
  for (const auto& p : job.passes) {
    if (std::find(kPasses.begin(), kPasses.end(), p) == kPasses.end()) throw UsageError("unknown pass '" + p + "'");
    if (p.rfind("sym-", 0) == 0 && job.method != "amplitude")
      throw UsageError("pass '" + p + "' applies to amplitude encoding only");
  }

  const bool amplitude = job.method == "amplitude";
  std::optional<Pmf> pmf;
  std::optional<PlaTable> pla;
  if (amplitude) pmf = load_pmf(job.input, job.qubits);
  else pla = read_pla_file(job.input);

  const auto t0 = std::chrono::steady_clock::now();
  Circuit c;
  if (amplitude) {
    c = synth_amplitude(*pmf);
  } else if (job.method == "esop") {
    c = synth_esop(*pla);
  } else if (job.method == "tbs" || job.method == "tbs-rm") {
    c = tbs_circuit(*pla, job.method == "tbs-rm", job.max_rows);
  } else {
    QromOptions qo;
    qo.max_rows = job.max_rows;
    qo.encoding = job.method == "basis"   ? Encoding::Basis
                  : job.method == "angle" ? Encoding::Angle
                                          : Encoding::ImprovedAngle;
    c = qrom_pipeline(*pla, qo);
  }

  std::vector<std::string> rest;
  for (const auto& p : job.passes) {
    if (p == "sym-dup" || p == "sym-mirror") {
      // Rebuilds the state preparation; must precede the circuit passes.
      if (!rest.empty()) throw UsageError("symmetric passes must come before circuit passes");
      c = symmetric_optimize(*pmf, p == "sym-dup" ? Symmetry::Duplicate : Symmetry::Mirror);
    } else {
      rest.push_back(p);
    }
  }
  c = apply_passes(c, rest);
  if (job.gateset == Gateset::Uniform && std::find(rest.begin(), rest.end(), "uniform") == rest.end())
    c = lower_to_uniform(c);
  const auto t1 = std::chrono::steady_clock::now();
  return {std::move(c), std::chrono::duration_cast<std::chrono::microseconds>(t1 - t0).count()};
}

json metrics_json(const Circuit& c, std::int64_t micros) {
  const Metrics m = metrics(c);
  json j;
  j["schema_version"] = kSchemaVersion;
  j["qubits"] = m.qubit_count;
  j["gate_count"] = m.gate_count;
  j["complexity"] = m.complexity;
  j["depth"] = m.depth;
  j["parameterized_gate_count"] = m.parameterized_gate_count;
  j["synth_time_us"] = micros;
  return j;
}

void write_file(const fs::path& p, const std::string& text) {
  if (p.has_parent_path()) fs::create_directories(p.parent_path());
  std::ofstream f(p, std::ios::binary);
  if (!f) throw std::runtime_error("cannot write " + p.string());
  f << text;
}

std::string read_file(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw UsageError("cannot read " + path);
  std::stringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

// ---------------------------------------------------------------- isolation

// Runs body in a child process; the child's return value is its exit code.
// Returns kTimeout if the child outlives the limit (0 disables the limit).
template <class F>
int run_isolated(double timeout_s, F body) {
  std::fflush(nullptr);
  const pid_t pid = fork();
  if (pid < 0) return body();
  if (pid == 0) {
    int rc = body();
    std::fflush(nullptr);
    _exit(rc);
  }
  const auto deadline = std::chrono::steady_clock::now() + std::chrono::duration<double>(timeout_s);
  int status = 0;
  while (true) {
    const pid_t r = waitpid(pid, &status, timeout_s > 0 ? WNOHANG : 0);
    if (r == pid) break;
    if (timeout_s > 0 && std::chrono::steady_clock::now() >= deadline) {
      kill(pid, SIGKILL);
      waitpid(pid, &status, 0);
      return kTimeout;
    }
    std::this_thread::sleep_for(std::chrono::milliseconds(5));
  }
  if (WIFEXITED(status)) return WEXITSTATUS(status);
  return kInternal;
}

template <class F>
int guarded(F body, std::string* message = nullptr) {
  auto fail = [&](const char* what, int rc) {
    if (message) *message = what;
    else std::cerr << "qsynth: " << what << "\n";
    return rc;
  };
  try {
    return body();
  } catch (const UsageError& e) {
    return fail(e.what(), kUsage);
  } catch (const Error& e) {
    return fail(e.what(), exit_for(e.code()));
  } catch (const std::exception& e) {
    return fail(e.what(), kInternal);
  }
}

// ---------------------------------------------------------------- verify

// Runs a circuit on a basis state; non-classical circuits must still map it
// to a single basis state.
std::optional<std::vector<std::uint8_t>> run_basis(const Circuit& c, std::vector<std::uint8_t> bits, bool classical) {
  if (classical) {
    run_reversible_inplace(c, bits);
    return bits;
  }
  std::uint64_t idx = 0;
  for (auto b : bits) idx = (idx << 1) | b;
  const auto probs = run_statevector(c, idx).probabilities();
  const auto best = static_cast<std::uint64_t>(std::max_element(probs.begin(), probs.end()) - probs.begin());
  if (probs[best] < 1.0 - 1e-9) return std::nullopt;
  for (std::size_t k = 0; k < bits.size(); ++k) bits[k] = (best >> (bits.size() - 1 - k)) & 1u;
  return bits;
}

std::uint64_t read_bits(const std::vector<std::uint8_t>& bits, std::size_t from, int count) {
  std::uint64_t v = 0;
  for (int k = 0; k < count; ++k) v = (v << 1) | bits[from + static_cast<std::size_t>(k)];
  return v;
}

void write_bits(std::vector<std::uint8_t>& bits, std::size_t from, int count, std::uint64_t v) {
  for (int k = 0; k < count; ++k) bits[from + static_cast<std::size_t>(k)] = (v >> (count - 1 - k)) & 1u;
}

bool all_zero(const std::vector<std::uint8_t>& bits, std::size_t from) {
  return std::all_of(bits.begin() + static_cast<std::ptrdiff_t>(from), bits.end(), [](auto b) { return b == 0; });
}

// Truth-table check. Register layout per method: esop and basis put the
// inputs first and the outputs right after; tbs embeds into W lines.
json verify_classical(const Circuit& c, const PlaTable& pla, const std::string& method, std::size_t max_rows) {
  const bool classical = std::all_of(c.gates().begin(), c.gates().end(),
                                     [](const Gate& g) { return g.kind == GateKind::X || g.kind == GateKind::Measure; });
  const int n = pla.num_inputs, m = pla.num_outputs;
  std::vector<std::pair<std::uint64_t, std::uint64_t>> cases;
  int width = n + m;
  int in_shift = 0, out_at = n;
  if (method == "basis") {
    const QromSpec spec = qrom_from_table(pla, max_rows);
    std::map<std::uint64_t, std::uint64_t> mem(spec.pairs.begin(), spec.pairs.end());
    for (std::uint64_t a = 0; a < (std::uint64_t{1} << n); ++a) cases.emplace_back(a, mem.count(a) ? mem[a] : 0);
  } else {
    TruthTableOptions o;
    o.max_rows = max_rows;
    const TruthTable t = to_truth_table(pla, o);
    cases = t.entries;
    if (method == "tbs" || method == "tbs-rm") {
      o.fill_absent = true;
      width = make_one_to_one(to_truth_table(pla, o), max_rows).width();
      in_shift = width - n;
      out_at = 0;
    }
  }
  if (static_cast<int>(c.num_qubits()) < width)
    throw UsageError("circuit has " + std::to_string(c.num_qubits()) + " qubits, layout needs " + std::to_string(width));

  std::size_t mismatches = 0;
  json first = nullptr;
  for (const auto& [x, y] : cases) {
    std::vector<std::uint8_t> bits(c.num_qubits(), 0);
    write_bits(bits, 0, in_shift ? width : n, in_shift ? x << in_shift : x);
    const auto out = run_basis(c, bits, classical);
    const bool ok = out && read_bits(*out, static_cast<std::size_t>(out_at), m) == y &&
                    all_zero(*out, static_cast<std::size_t>(width));
    if (!ok) {
      if (mismatches == 0) first = json{{"input", index_to_bits(x, n)}, {"expected", index_to_bits(y, m)}};
      ++mismatches;
    }
  }
  json j;
  j["kind"] = "truth-table";
  j["cases"] = cases.size();
  j["mismatches"] = mismatches;
  if (mismatches) j["first_mismatch"] = first;
  j["ok"] = mismatches == 0;
  return j;
}

json verify_distribution(const Circuit& c, const Pmf& pmf, std::uint64_t shots, std::uint64_t seed) {
  const int q = pmf.num_qubits();
  if (static_cast<int>(c.num_qubits()) < q) throw UsageError("circuit is narrower than the distribution");
  std::vector<Qubit> data(static_cast<std::size_t>(q));
  for (int k = 0; k < q; ++k) data[static_cast<std::size_t>(k)] = static_cast<Qubit>(k);
  const auto exact = run_statevector(c).marginal(data);
  double max_diff = 0.0;
  for (std::size_t i = 0; i < exact.size(); ++i) max_diff = std::max(max_diff, std::abs(exact[i] - pmf.p[i]));

  const CountHistogram h = sample(exact, q, shots, seed);
  const GTest g = g_statistic(h, pmf);
  json j;
  j["kind"] = "distribution";
  j["bins"] = exact.size();
  j["max_abs_diff"] = max_diff;
  j["kl"] = kl_divergence(pmf.p, exact).value;
  j["js"] = js_divergence(pmf.p, exact);
  j["shots"] = shots;
  j["seed"] = seed;
  j["g"] = g.g;
  j["p"] = g.p;
  j["similarity"] = similarity(g.per_shot());
  j["ok"] = max_diff <= 1e-9;
  return j;
}

// ---------------------------------------------------------------- bench

struct Cell {
  std::string input;
  SynthJob job;
  std::string opt_text = "-";
  std::string gateset_text = "natural";
};

std::vector<Cell> read_manifest(const std::string& path, std::size_t max_rows) {
  std::ifstream f(path);
  if (!f) throw UsageError("cannot read manifest " + path);
  const fs::path base = fs::path(path).parent_path();
  std::vector<Cell> cells;
  std::string line;
  for (int lineno = 1; std::getline(f, line); ++lineno) {
    if (auto h = line.find('#'); h != std::string::npos) line.resize(h);
    std::istringstream in(line);
    std::vector<std::string> tok;
    for (std::string t; in >> t;) tok.push_back(t);
    if (tok.empty()) continue;
    if (tok.size() < 2 || tok.size() > 4)
      throw UsageError(path + ":" + std::to_string(lineno) + ": expected <input> <method> [passes|-] [gateset]");
    Cell cell;
    cell.input = tok[0];
    cell.job.method = tok[1];
    cell.job.max_rows = max_rows;
    const fs::path p(tok[0]);
    // Built-in distribution names are not paths.
    const bool keep = p.is_absolute() || (tok[1] == "amplitude" && !fs::exists(base / p));
    cell.job.input = keep ? p.string() : (base / p).string();
    if (tok.size() > 2 && tok[2] != "-") {
      cell.opt_text = tok[2];
      cell.job.passes = split_list(tok[2]);
    }
    if (tok.size() > 3) {
      if (tok[3] != "natural" && tok[3] != "uniform") throw UsageError("bad gateset '" + tok[3] + "'");
      cell.gateset_text = tok[3];
      cell.job.gateset = parse_gateset(tok[3]);
    }
    cells.push_back(std::move(cell));
  }
  return cells;
}

struct CellResult {
  std::string status = "error";
  json metrics;
  std::string message;
  double wall_s = 0.0;
};

// Child side: synthesize and send one JSON line back.
[[noreturn]] void bench_child(const Cell& cell, int fd) {
  json out;
  std::string message;
  const int rc = guarded(
      [&] {
        const SynthResult r = run_synth(cell.job);
        out = metrics_json(r.circuit, r.micros);
        return kOk;
      },
      &message);
  if (rc != kOk) out = json{{"exit", rc}, {"message", message}};
  const std::string s = out.dump() + "\n";
  for (std::size_t off = 0; off < s.size();) {
    const ssize_t w = write(fd, s.data() + off, s.size() - off);
    if (w <= 0) break;
    off += static_cast<std::size_t>(w);
  }
  close(fd);
  std::fflush(nullptr);
  _exit(rc);
}

std::vector<CellResult> run_cells(const std::vector<Cell>& cells, double timeout_s, unsigned jobs) {
  struct Running {
    std::size_t cell;
    pid_t pid;
    int fd;
    std::string buf;
    std::chrono::steady_clock::time_point start;
  };
  std::vector<CellResult> results(cells.size());
  std::vector<Running> running;
  std::size_t next = 0;
  auto drain = [](Running& r) {
    char tmp[4096];
    for (ssize_t n; (n = read(r.fd, tmp, sizeof tmp)) > 0;) r.buf.append(tmp, static_cast<std::size_t>(n));
  };
  while (next < cells.size() || !running.empty()) {
    while (next < cells.size() && running.size() < jobs) {
      int fds[2];
      if (pipe(fds) != 0) throw std::runtime_error("pipe failed");
      std::fflush(nullptr);
      const pid_t pid = fork();
      if (pid < 0) throw std::runtime_error("fork failed");
      if (pid == 0) {
        close(fds[0]);
        bench_child(cells[next], fds[1]);
      }
      close(fds[1]);
      fcntl(fds[0], F_SETFL, O_NONBLOCK);
      running.push_back({next++, pid, fds[0], {}, std::chrono::steady_clock::now()});
    }
    std::this_thread::sleep_for(std::chrono::milliseconds(2));
    for (auto it = running.begin(); it != running.end();) {
      drain(*it);
      CellResult& res = results[it->cell];
      const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - it->start).count();
      int status = 0;
      const pid_t r = waitpid(it->pid, &status, WNOHANG);
      if (r == 0 && (timeout_s <= 0 || wall < timeout_s)) {
        ++it;
        continue;
      }
      if (r == 0) {
        kill(it->pid, SIGKILL);
        waitpid(it->pid, &status, 0);
        res.status = "timeout";
        res.message = "exceeded " + std::to_string(timeout_s) + " s";
      } else {
        drain(*it);
        const json j = json::parse(it->buf, nullptr, false);
        if (WIFEXITED(status) && WEXITSTATUS(status) == kOk && j.is_object()) {
          res.status = "ok";
          res.metrics = j;
        } else {
          res.status = "error";
          if (j.is_object() && j.contains("message")) res.message = j["message"].get<std::string>();
          else if (WIFSIGNALED(status)) res.message = "signal " + std::to_string(WTERMSIG(status));
          else res.message = "exit " + std::to_string(WIFEXITED(status) ? WEXITSTATUS(status) : -1);
        }
      }
      res.wall_s = wall;
      close(it->fd);
      it = running.erase(it);
    }
  }
  return results;
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char ch : s) out += ch == '"' ? std::string("\"\"") : std::string(1, ch);
  return out + "\"";
}

const std::vector<std::string> kMetricKeys = {"qubits", "gate_count", "complexity", "depth",
                                              "parameterized_gate_count", "synth_time_us"};

std::string bench_csv(const std::vector<Cell>& cells, const std::vector<CellResult>& res) {
  std::string out = "function,method,opt,gateset,status";
  for (const auto& k : kMetricKeys) out += "," + k;
  out += ",message\n";
  for (std::size_t i = 0; i < cells.size(); ++i) {
    out += csv_field(fs::path(cells[i].input).stem().string()) + "," + cells[i].job.method + "," +
           csv_field(cells[i].opt_text) + "," + cells[i].gateset_text + "," + res[i].status;
    for (const auto& k : kMetricKeys)
      out += "," + (res[i].status == "ok" ? res[i].metrics[k].dump() : std::string(res[i].status == "timeout" ? "*" : ""));
    out += "," + csv_field(res[i].message) + "\n";
  }
  return out;
}

std::string bench_json(const std::vector<Cell>& cells, const std::vector<CellResult>& res) {
  json j;
  j["schema_version"] = kSchemaVersion;
  j["cells"] = json::array();
  for (std::size_t i = 0; i < cells.size(); ++i) {
    json c;
    c["function"] = fs::path(cells[i].input).stem().string();
    c["input"] = cells[i].input;
    c["method"] = cells[i].job.method;
    c["opt"] = cells[i].job.passes;
    c["gateset"] = cells[i].gateset_text;
    c["status"] = res[i].status;
    if (res[i].status == "ok")
      for (const auto& k : kMetricKeys) c[k] = res[i].metrics[k];
    if (!res[i].message.empty()) c["message"] = res[i].message;
    j["cells"].push_back(c);
  }
  return j.dump(2) + "\n";
}

void emit(const std::string& text, const std::string& out) {
  if (out.empty()) std::cout << text;
  else write_file(out, text);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Quantum circuit synthesis from PLA logic and probability distributions"};
  app.require_subcommand(1);

  std::string method = "esop", gateset = "natural", opt, out, report = "json";
  std::optional<int> qubits;
  std::uint64_t shots = 10000, seed = 1;
  double timeout = 60.0;
  unsigned jobs = std::max(1u, std::thread::hardware_concurrency());

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--timeout", timeout, "wall-time limit in seconds, 0 for none")->capture_default_str();
    sub->add_option("--out", out, "output path");
  };
  auto add_method = [&](CLI::App* sub) {
    sub->add_option("--method", method, "synthesis method")->check(CLI::IsMember(kMethods))->capture_default_str();
    sub->add_option("--qubits", qubits, "register width for distributions")->check(CLI::Range(1, 20));
  };

  std::string input;
  auto* synth = app.add_subcommand("synth", "synthesize a circuit, write QASM and a metrics sidecar");
  add_method(synth);
  add_common(synth);
  synth->add_option("--gateset", gateset, "QASM gate set")->check(CLI::IsMember({"natural", "uniform"}))->capture_default_str();
  synth->add_option("--opt", opt, "comma-separated optimization passes");
  synth->add_option("input", input, "PLA file, PMF file or built-in distribution name")->required();

  std::string circuit_path;
  auto* verify = app.add_subcommand("verify", "check a QASM circuit against its source function or distribution");
  add_method(verify);
  add_common(verify);
  verify->add_option("--circuit", circuit_path, "QASM circuit to check")->required()->check(CLI::ExistingFile);
  verify->add_option("--shots", shots, "samples for the G-test")->capture_default_str();
  verify->add_option("--seed", seed, "sampling seed")->capture_default_str();
  verify->add_option("input", input, "source PLA, PMF file or built-in distribution name")->required();

  std::string manifest;
  auto* bench = app.add_subcommand("bench", "run a manifest of synthesis cells in isolated workers");
  add_common(bench);
  bench->add_option("--report", report, "table format")->check(CLI::IsMember({"json", "csv"}))->capture_default_str();
  bench->add_option("--jobs", jobs, "parallel workers")->check(CLI::PositiveNumber);
  bench->add_option("manifest", manifest, "lines of: <input> <method> [passes|-] [natural|uniform]")
      ->required()
      ->check(CLI::ExistingFile);

  std::optional<std::string> suit;
  std::optional<int> value;
  int iterations = -1, sweep = -1;
  auto* grover = app.add_subcommand("grover", "card search over a 52-card deck encoding");
  add_common(grover);
  grover->add_option("--suit", suit, "clubs, hearts, diamonds or spades");
  grover->add_option("--value", value, "card value 1..13");
  grover->add_option("--iterations", iterations, "Grover iterations; default is the rounded optimum");
  grover->add_option("--shots", shots, "samples")->capture_default_str();
  grover->add_option("--seed", seed, "sampling seed")->capture_default_str();
  grover->add_option("--sweep", sweep, "report success for k = 0..K instead");
  grover->add_option("--report", report, "sweep format")->check(CLI::IsMember({"json", "csv"}))->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kOk : kUsage;
  }

  std::size_t max_rows = kDefaultMaxRows;
  try {
    max_rows = max_rows_from_env();
  } catch (const UsageError& e) {
    std::cerr << "qsynth: " << e.what() << "\n";
    return kUsage;
  }

  if (*synth) {
    return run_isolated(timeout, [&] {
      return guarded([&] {
        SynthJob job;
        job.input = input;
        job.method = method;
        job.passes = split_list(opt);
        job.gateset = parse_gateset(gateset);
        job.qubits = qubits;
        job.max_rows = max_rows;
        const SynthResult r = run_synth(job);
        const fs::path qasm = out.empty() ? fs::path(fs::path(input).stem().string() + "." + method + ".qasm") : fs::path(out);
        write_file(qasm, emit_qasm(r.circuit, job.gateset));
        fs::path side = qasm;
        side.replace_extension(".json");
        write_file(side, metrics_json(r.circuit, r.micros).dump(2) + "\n");
        return kOk;
      });
    });
  }

  if (*verify) {
    return run_isolated(timeout, [&] {
      return guarded([&] {
        const Circuit c = parse_qasm(read_file(circuit_path));
        json report_json;
        report_json["schema_version"] = kSchemaVersion;
        report_json["circuit"] = circuit_path;
        report_json["source"] = input;
        report_json["method"] = method;
        json result;
        if (method == "amplitude") {
          result = verify_distribution(c, load_pmf(input, qubits), shots, seed);
        } else if (method == "angle" || method == "improved-angle") {
          throw UsageError("angle-encoded memories have no truth-table check; verify the basis encoding instead");
        } else {
          result = verify_classical(c, read_pla_file(input), method, max_rows);
        }
        report_json.update(result);
        emit(report_json.dump(2) + "\n", out);
        return result["ok"].get<bool>() ? kOk : kVerifyFailed;
      });
    });
  }

  if (*bench) {
    return guarded([&] {
      const auto cells = read_manifest(manifest, max_rows);
      const auto res = run_cells(cells, timeout, jobs);
      emit(report == "csv" ? bench_csv(cells, res) : bench_json(cells, res), out);
      bool timed_out = false, failed = false;
      for (const auto& r : res) {
        timed_out = timed_out || r.status == "timeout";
        failed = failed || r.status == "error";
      }
      return failed ? kSynthesis : timed_out ? kTimeout : kOk;
    });
  }

  return run_isolated(timeout, [&] {
    return guarded([&] {
      GroverSpec spec{6, card_predicate(suit, value), 0, shots};
      const auto solutions = grover_solutions(spec).size();
      if (sweep >= 0) {
        const auto rows = iteration_sweep(spec, sweep, seed);
        if (report == "csv") {
          emit(sweep_csv(rows), out);
        } else {
          json j;
          j["schema_version"] = kSchemaVersion;
          j["solutions"] = solutions;
          j["rows"] = json::array();
          for (const auto& r : rows)
            j["rows"].push_back({{"k", r.k}, {"p_analytic", r.p_analytic}, {"p_simulated", r.p_simulated},
                                 {"shots", r.shots}, {"hits", r.hits}});
          emit(j.dump(2) + "\n", out);
        }
        return kOk;
      }
      spec.iterations = iterations >= 0 ? iterations : naive_iterations(64, solutions);
      const auto rows = iteration_sweep(spec, spec.iterations, seed);
      const SweepRow& last = rows.back();
      json j;
      j["schema_version"] = kSchemaVersion;
      j["solutions"] = solutions;
      j["iterations"] = spec.iterations;
      j["p_analytic"] = last.p_analytic;
      j["p_simulated"] = last.p_simulated;
      j["shots"] = last.shots;
      j["hits"] = last.hits;
      emit(j.dump(2) + "\n", out);
      return kOk;
    });
  });
}
