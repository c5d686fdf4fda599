// SPDX-License-Identifier: Apache-2.0

#include "rbhier/experiment.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <map>
#include <memory>
#include <optional>
#include <ostream>
#include <sstream>
#include <json.hpp>
#include <openssl/evp.h>
#include "rbhier/estimators.hpp"

#ifndef RBHIER_VERSION
#define RBHIER_VERSION "0.0.0"
#endif

namespace rbhier
{

namespace
{

namespace fs = std::filesystem;
using json = nlohmann::ordered_json;
using Clock = std::chrono::steady_clock;

constexpr double inf = std::numeric_limits<double>::infinity();

double since(Clock::time_point t0)
{
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::string fmt(double v)
{
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.12e", v);
  return buf;
}

struct Variant
{
  std::string name;
  int rule = 0;    // lagrange_plus<rule>
  int taylor = 0;  // taylor_K<taylor>
  bool hier = false;
};

std::vector<Variant> variants_of(const ExperimentConfig &cfg)
{
  std::vector<Variant> out;
  for (int r : cfg.m_rules)
  {
    out.push_back({"lagrange_plus" + std::to_string(r), r, 0, false});
  }
  for (int k : cfg.taylor_orders)
  {
    out.push_back({"taylor_K" + std::to_string(k), 0, k, false});
  }
  if (cfg.sampling == Sampling::weak_hier)
  {
    out.push_back({"hier", 0, 0, true});
  }
  return out;
}

// Entry of one (variant, N): X_N is the first N columns of basis `basis_name`, X_M all M.
struct VariantEntry
{
  int n = 0, m = 0;
  std::string basis_name;
  double theta = 0.0;
};

std::string entry_key(const std::string &variant, int n)
{
  return variant + "/N" + std::to_string(n);
}

void write_file(const fs::path &file, const std::string &text)
{
  std::ofstream out(file, std::ios::binary | std::ios::trunc);
  out << text;
  if (!out)
  {
    throw IoError("cannot write " + file.string());
  }
}

std::string sha256_file(const fs::path &file)
{
  std::ifstream in(file, std::ios::binary);
  if (!in)
  {
    throw IoError("cannot read " + file.string());
  }
  EVP_MD_CTX *ctx = EVP_MD_CTX_new();
  EVP_DigestInit_ex(ctx, EVP_sha256(), nullptr);
  char buf[1 << 16];
  while (in.read(buf, sizeof buf) || in.gcount() > 0)
  {
    EVP_DigestUpdate(ctx, buf, static_cast<std::size_t>(in.gcount()));
  }
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  EVP_DigestFinal_ex(ctx, digest, &len);
  EVP_MD_CTX_free(ctx);
  std::string hex;
  char h[3];
  for (unsigned int i = 0; i < len; i++)
  {
    std::snprintf(h, sizeof h, "%02x", digest[i]);
    hex += h;
  }
  return hex;
}

std::optional<json> read_manifest(const fs::path &dir)
{
  const fs::path file = dir / "manifest.json";
  if (!fs::exists(file))
  {
    return std::nullopt;
  }
  std::ifstream in(file);
  try
  {
    return json::parse(in);
  }
  catch (const json::exception &)
  {
    return std::nullopt;
  }
}

void write_manifest(const fs::path &dir, const json &m)
{
  write_file(dir / "manifest.json", m.dump(2) + "\n");
}

bool is_artifact_name(const std::string &name)
{
  static const std::vector<std::string> fixed{
    "config.ini",       "truth_train.rbh", "truth_test.rbh",  "greedy_trace.csv",
    "theta_log.csv",    "bases.rbh",       "scm.rbh",         "scm_history.csv",
    "manifest.json"};
  static const std::vector<std::pair<std::string, std::string>> patterns{
    {"theta_", ".csv"},   {"effectivity_", ".csv"}, {"figure_", ".dat"},
    {"scatter_", ".dat"}};
  if (std::find(fixed.begin(), fixed.end(), name) != fixed.end())
  {
    return true;
  }
  for (const auto &[head, tail] : patterns)
  {
    if (name.size() > head.size() + tail.size() && name.starts_with(head) &&
        name.ends_with(tail))
    {
      return true;
    }
  }
  return false;
}

// Removes files written by an earlier run; anything else in the directory is left alone.
void clear_artifacts(const fs::path &dir)
{
  for (const auto &e : fs::directory_iterator(dir))
  {
    if (e.is_regular_file() && is_artifact_name(e.path().filename().string()))
    {
      fs::remove(e.path());
    }
  }
}

ThetaOptions theta_options(const ExperimentConfig &cfg)
{
  ThetaOptions t;
  t.method = cfg.theta_method;
  t.guess = cfg.initial_guess;
  t.exclude_tol = cfg.exclude_tol;
  t.tol = cfg.theta_tol;
  t.reproduced_tol = cfg.reproduced_tol;
  return t;
}

std::vector<std::size_t> read_indices(const Container &c, const std::string &name)
{
  const RealMatrix &m = c.real_matrix(name);
  std::vector<std::size_t> out;
  for (Eigen::Index i = 0; i < m.rows(); i++)
  {
    out.push_back(static_cast<std::size_t>(m(i, 0)));
  }
  return out;
}

RealMatrix index_column(const std::vector<std::size_t> &v)
{
  RealMatrix m(static_cast<Eigen::Index>(v.size()), 1);
  for (std::size_t i = 0; i < v.size(); i++)
  {
    m(static_cast<Eigen::Index>(i), 0) = static_cast<double>(v[i]);
  }
  return m;
}

std::vector<std::string> split_lines(const std::string &text)
{
  std::vector<std::string> out;
  std::istringstream is(text);
  std::string line;
  while (std::getline(is, line))
  {
    if (!line.empty())
    {
      out.push_back(line);
    }
  }
  return out;
}

std::vector<VariantEntry> read_entries(const Container &c, const std::string &variant)
{
  std::vector<VariantEntry> out;
  const int count = static_cast<int>(c.scalar(variant + "/count"));
  const RealMatrix &ns = c.real_matrix(variant + "/ns");
  for (int j = 0; j < count; j++)
  {
    VariantEntry e;
    e.n = static_cast<int>(ns(j, 0));
    const std::string key = entry_key(variant, e.n);
    e.m = static_cast<int>(c.scalar(key + "/m"));
    e.theta = c.scalar(key + "/theta");
    e.basis_name = c.text(key + "/basis");
    out.push_back(e);
  }
  return out;
}

// Bases of a bases.rbh file, loaded on first use.
class BasisStore
{
public:
  BasisStore(const Container &c, const TruthModel &model)
    : c_(c), model_(model), gram_(std::make_shared<SparseMatrix>(model.reference_gram()))
  {
  }

  const ReducedBasis &basis(const std::string &name)
  {
    auto it = bases_.find(name);
    if (it == bases_.end())
    {
      it = bases_.emplace(name, ReducedBasis::load(c_, name, gram_)).first;
    }
    return it->second;
  }

  const ReducedModel &model(const std::string &name)
  {
    auto it = models_.find(name);
    if (it == models_.end())
    {
      it = models_.emplace(name, ReducedModel::load(c_, name + "_rm", model_)).first;
    }
    return it->second;
  }

private:
  const Container &c_;
  const TruthModel &model_;
  std::shared_ptr<const SparseMatrix> gram_;
  std::map<std::string, ReducedBasis> bases_;
  std::map<std::string, ReducedModel> models_;
};

// Saturation constant of one (variant, N) entry on the training set.
double entry_theta(const TruthModel &model, const SampleSet &train, const TruthCache &truth,
                   const ReducedBasis &basis, const ReducedModel &rm, int n, int m,
                   const std::vector<std::size_t> &selected, const ExperimentConfig &cfg)
{
  ThetaOptions topts = theta_options(cfg);
  topts.snapshots.assign(selected.begin(), selected.begin() + n);
  std::optional<ResidualData> rd;
  if (cfg.theta_method == ThetaMethod::dinkelbach)
  {
    rd = build_residual_data(model, basis);
  }
  return compute_theta(model, train, truth.solutions(), basis, rm, n, m, topts,
                       rd ? &*rd : nullptr)
    .theta;
}

struct OfflineState
{
  fs::path dir;
  json manifest;
  Clock::time_point t0;
};

RunOutcome finish(OfflineState &st, int code, bool complete, const std::string &status,
                  const std::string &message, std::ostream &log)
{
  json artifacts = json::array();
  std::vector<fs::path> files;
  for (const auto &e : fs::directory_iterator(st.dir))
  {
    const std::string name = e.path().filename().string();
    if (e.is_regular_file() && name != "manifest.json" && is_artifact_name(name))
    {
      files.push_back(e.path());
    }
  }
  std::sort(files.begin(), files.end());
  for (const auto &f : files)
  {
    artifacts.push_back({{"file", f.filename().string()}, {"sha256", sha256_file(f)}});
  }
  st.manifest["artifacts"] = artifacts;
  st.manifest["wall_times"]["total"] = since(st.t0);
  st.manifest["finished"] = true;
  st.manifest["complete"] = complete;
  st.manifest["status"] = status;
  st.manifest["exit_code"] = code;
  if (!message.empty())
  {
    st.manifest["message"] = message;
  }
  write_manifest(st.dir, st.manifest);
  log << "offline: " << status << (message.empty() ? "" : ": " + message) << '\n';
  return {code, false, message};
}

}  // namespace

std::string version_string() { return RBHIER_VERSION; }

RunOutcome run_offline(const ExperimentConfig &cfg, bool force, std::ostream &log)
{
  validate(cfg);
  OfflineState st;
  st.t0 = Clock::now();
  st.dir = output_path(cfg);
  fs::create_directories(st.dir);
  const std::string hash = config_hash(cfg);

  if (const auto old = read_manifest(st.dir); old && !force)
  {
    if (old->value("config_hash", "") == hash && old->value("finished", false))
    {
      const int code = old->value("exit_code", 0);
      log << "offline: artifacts for config " << hash.substr(0, 12) << " present in "
          << st.dir.string() << ", skipped\n";
      return {code, true, old->value("message", "")};
    }
  }
  clear_artifacts(st.dir);

  st.manifest = json::object();
  st.manifest["config_hash"] = hash;
  st.manifest["version"] = version_string();
  st.manifest["eigen"] = std::to_string(EIGEN_WORLD_VERSION) + "." +
                         std::to_string(EIGEN_MAJOR_VERSION) + "." +
                         std::to_string(EIGEN_MINOR_VERSION);
  st.manifest["finished"] = false;
  st.manifest["complete"] = false;
  st.manifest["status"] = "running";
  write_manifest(st.dir, st.manifest);
  write_file(st.dir / "config.ini", serialize(cfg));

  const TruthModel model = build_model(cfg);
  const SampleSet train = training_set(cfg);
  const int P = model.parameter_dim();
  log << "offline: " << model.name() << ", " << model.dofs() << " dofs, " << train.size()
      << " training points\n";

  auto t = Clock::now();
  const TruthCache truth = TruthCache::load_or_compute(model, train, st.dir / "truth_train.rbh");
  st.manifest["wall_times"]["truth_train"] = since(t);

  Container bases;
  std::optional<ScmState> scm;
  bool scm_converged = true;
  if (cfg.beta_source == BetaSource::scm)
  {
    t = Clock::now();
    scm = scm_offline(model, train, scm_config(cfg, model));
    st.manifest["wall_times"]["scm"] = since(t);
    Container c;
    scm->save(c, "scm");
    c.save(st.dir / "scm.rbh");
    std::ostringstream os;
    write_scm_history(os, *scm, P);
    write_file(st.dir / "scm_history.csv", os.str());
    scm_converged = scm->converged();
    log << "offline: SCM " << scm->num_constraints() << " constraints, final gap "
        << (scm->history().empty() ? 0.0 : scm->history().back().gap)
        << (scm_converged ? "" : " (not converged)") << '\n';
    if (!scm_converged && cfg.sampling == Sampling::weak_std)
    {
      return finish(st, exit_scm, false, "scm_not_converged",
                    "SCM did not reach the gap tolerance within scm.k_max constraints; the "
                    "weak greedy with SCM bounds was not run",
                    log);
    }
  }

  // Greedy basis X_N (with extra columns for the Lagrange M rules).
  const int max_rule = cfg.m_rules.empty()
                         ? 0
                         : *std::max_element(cfg.m_rules.begin(), cfg.m_rules.end());
  GreedyOptions gopts;
  gopts.n_max = static_cast<int>(
    std::min<std::size_t>(cfg.n_max + (cfg.sampling == Sampling::weak_hier ? 0 : max_rule),
                          train.size()));
  gopts.tol = cfg.greedy_tol;
  gopts.drop_tol = cfg.drop_tol;
  gopts.first_index = cfg.first_index;

  t = Clock::now();
  ReducedBasis xn;
  GreedyTrace trace;
  std::vector<std::size_t> selected;
  std::vector<int> orders;
  bool saturation_failed = false;
  switch (cfg.sampling)
  {
  case Sampling::strong:
  {
    auto r = strong_greedy(model, train, truth, gopts);
    xn = std::move(r.basis);
    trace = std::move(r.trace);
    selected = std::move(r.selected);
    break;
  }
  case Sampling::weak_std:
  {
    BetaProvider beta;
    switch (cfg.beta_source)
    {
    case BetaSource::exact_eig:
      beta = exact_beta_provider(model, train);
      break;
    case BetaSource::scm:
      beta = scm_beta_provider(*scm);
      break;
    case BetaSource::min_theta:
      beta = min_theta_beta_provider(model);
      break;
    }
    auto r = weak_greedy_std(model, train, beta, gopts, to_string(cfg.beta_source));
    xn = std::move(r.basis);
    trace = std::move(r.trace);
    selected = std::move(r.selected);
    break;
  }
  case Sampling::weak_hier:
  {
    HierGreedyOptions h;
    static_cast<GreedyOptions &>(h) = gopts;
    h.k_max = cfg.k_max;
    h.exclude_tol = cfg.exclude_tol;
    auto r = weak_greedy_hier(model, train, truth, h);
    xn = std::move(r.xn);
    trace = std::move(r.trace);
    selected = std::move(r.selected);
    orders = std::move(r.orders);
    saturation_failed = r.saturation_failed;
    std::ostringstream os;
    os << "N,k,M,theta\n";
    for (const auto &l : trace.theta_log)
    {
      os << l.n << ',' << l.k << ',' << l.m << ',' << fmt(l.theta) << '\n';
    }
    write_file(st.dir / "theta_log.csv", os.str());
    break;
  }
  }
  st.manifest["wall_times"]["greedy"] = since(t);
  {
    std::ostringstream os;
    write_greedy_trace(os, trace, P, cfg.timing);
    write_file(st.dir / "greedy_trace.csv", os.str());
  }
  log << "offline: " << trace.selector_name << " greedy selected " << xn.size()
      << " parameters (" << trace.stop_reason << ")\n";

  // Stored X_N basis, its reduced model and residual data.
  const ReducedModel xn_rm = project(model, xn);
  xn.save(bases, "xn");
  xn_rm.save(bases, "xn_rm");
  save_residual_data(build_residual_data(model, xn), bases, "xn_rd");
  bases.put("selected", index_column(selected));

  std::vector<Parameter> snapshot_mu;
  for (std::size_t i : selected)
  {
    snapshot_mu.push_back(train[i]);
  }

  // Comparison spaces X_M and their saturation constants.
  t = Clock::now();
  std::string variant_list;
  const int n_top = std::min(cfg.n_max, xn.size());
  for (const Variant &v : variants_of(cfg))
  {
    std::vector<VariantEntry> entries;
    for (int n = 1; n <= n_top; n++)
    {
      VariantEntry e;
      e.n = n;
      if (v.rule > 0)
      {
        if (n + v.rule > xn.size())
        {
          break;
        }
        e.m = n + v.rule;
        e.basis_name = "xn";
        e.theta = entry_theta(model, train, truth, xn, xn_rm, n, e.m, selected, cfg);
      }
      else
      {
        if (v.hier && n > static_cast<int>(orders.size()))
        {
          break;
        }
        TaylorConfig tc;
        if (v.hier)
        {
          tc.orders.assign(orders.begin(), orders.begin() + n);
        }
        else
        {
          tc.orders = {v.taylor};
        }
        const std::vector<Parameter> mus(snapshot_mu.begin(), snapshot_mu.begin() + n);
        TaylorSpace ts;
        try
        {
          ts = build_taylor_space(model, mus, tc, xn.prefix(n), cfg.drop_tol);
        }
        catch (const PreconditionError &err)
        {
          log << "offline: " << v.name << " N=" << n << " skipped: " << err.what() << '\n';
          continue;
        }
        e.m = ts.basis.size();
        e.basis_name = entry_key(v.name, n);
        const ReducedModel rm = project(model, ts.basis);
        e.theta = entry_theta(model, train, truth, ts.basis, rm, n, e.m, selected, cfg);
        ts.basis.save(bases, e.basis_name);
        rm.save(bases, e.basis_name + "_rm");
      }
      entries.push_back(e);
    }

    std::ostringstream os;
    write_theta_header(os);
    RealMatrix ns(static_cast<Eigen::Index>(entries.size()), 1);
    for (std::size_t j = 0; j < entries.size(); j++)
    {
      const auto &e = entries[j];
      write_theta_row(os, e.n, e.m, e.theta, e.theta < 1.0);
      ns(static_cast<Eigen::Index>(j), 0) = e.n;
      const std::string key = entry_key(v.name, e.n);
      bases.put_scalar(key + "/m", e.m);
      bases.put_scalar(key + "/theta", e.theta);
      bases.put_text(key + "/basis", e.basis_name);
    }
    bases.put_scalar(v.name + "/count", static_cast<double>(entries.size()));
    bases.put(v.name + "/ns", ns);
    write_file(st.dir / ("theta_" + v.name + ".csv"), os.str());
    variant_list += v.name + "\n";
    log << "offline: " << v.name << ": " << entries.size() << " saturation constants\n";
  }
  bases.put_text("variants", variant_list);
  bases.save(st.dir / "bases.rbh");
  st.manifest["wall_times"]["variants"] = since(t);

  if (saturation_failed)
  {
    return finish(st, exit_saturation, false, "saturation_failure",
                  "saturation constant stayed >= 1 up to sampling.k_max at N = " +
                    std::to_string(xn.size()),
                  log);
  }
  if (!scm_converged)
  {
    return finish(st, exit_scm, true, "scm_not_converged",
                  "SCM did not reach the gap tolerance; its lower bounds are still valid", log);
  }
  return finish(st, exit_ok, true, "ok", "", log);
}

RunOutcome run_online_eval(const ExperimentConfig &cfg, std::ostream &log)
{
  validate(cfg);
  const fs::path dir = output_path(cfg);
  const auto manifest = read_manifest(dir);
  if (!manifest || manifest->value("config_hash", "") != config_hash(cfg) ||
      !manifest->value("complete", false))
  {
    return {exit_failure, false,
            "no complete offline artifacts for this config in " + dir.string()};
  }
  const auto t0 = Clock::now();
  const TruthModel model = build_model(cfg);
  const SampleSet test = test_set(cfg);
  const Container c = Container::load(dir / "bases.rbh");
  BasisStore store(c, model);
  const ResidualData rd = load_residual_data(c, "xn_rd", model);
  const TruthCache truth = TruthCache::load_or_compute(model, test, dir / "truth_test.rbh");

  // Lower bound of the reference-frame inf-sup constant; exact values are precomputed and
  // their eigensolve is not part of the timed online work.
  std::vector<double> exact_beta;
  std::optional<ScmState> scm;
  BetaProvider beta;
  switch (cfg.beta_source)
  {
  case BetaSource::exact_eig:
    for (const auto &mu : test.points())
    {
      exact_beta.push_back(
        inf_sup_only(model.assemble_operator(mu), model.reference_gram()).beta);
    }
    beta = [&exact_beta](std::size_t i, const Parameter &) { return exact_beta[i]; };
    break;
  case BetaSource::scm:
    scm = ScmState::load(Container::load(dir / "scm.rbh"), "scm", model);
    beta = scm_beta_provider(*scm);
    break;
  case BetaSource::min_theta:
    beta = min_theta_beta_provider(model);
    break;
  }

  volatile double sink = 0.0;
  for (const std::string &variant : split_lines(c.text("variants")))
  {
    std::ostringstream os;
    write_effectivity_header(os, model.parameter_dim());
    for (const VariantEntry &e : read_entries(c, variant))
    {
      const ReducedBasis &basis = store.basis(e.basis_name);
      const ReducedModel &rm = store.model(e.basis_name);
      for (std::size_t i = 0; i < test.size(); i++)
      {
        const Parameter &mu = test[i];
        const Vector cn = rb_solve(rm, mu, e.n);
        const Vector cm = rb_solve(rm, mu, e.m);
        const double err = truth_error(model, mu, truth[i], basis, cn);
        const double b = beta(i, mu);
        const double dstd = b > 0.0 ? delta_std(rd, mu, cn, b) : inf;
        const double dh = delta_hier(rm, mu, cn, cm);
        EffectivityRecord rec = make_effectivity_record(e.n, e.m, mu, err, dstd, dh, e.theta);
        if (err <= cfg.reproduced_tol * model.norm(truth[i], mu))
        {
          rec.eta.reset();  // reproduced to solver precision
        }
        if (cfg.timing)
        {
          rec.t_std = median_seconds(
            [&]
            {
              const double bb = beta(i, mu);
              sink = frame_factor(rd, mu) * residual_dual_norm(rd, mu, cn) / bb;
            });
          rec.t_hier = median_seconds(
            [&]
            {
              const Vector um = rb_solve(rm, mu, e.m);
              sink = delta_hier(rm, mu, cn, um);
            });
        }
        write_effectivity_row(os, rec);
      }
    }
    write_file(dir / ("effectivity_" + variant + ".csv"), os.str());
    log << "eval: " << variant << " written\n";
  }
  emit_figures(dir, log);

  json m = *manifest;
  m["eval"] = {{"complete", true},
               {"test_size", test.size()},
               {"test_seed", cfg.test_seed},
               {"wall_time", since(t0)}};
  write_manifest(dir, m);
  return {};
}

void emit_figures(const fs::path &dir, std::ostream &log)
{
  std::vector<fs::path> inputs;
  for (const auto &e : fs::directory_iterator(dir))
  {
    const std::string name = e.path().filename().string();
    if (e.is_regular_file() && name.starts_with("effectivity_") && name.ends_with(".csv"))
    {
      inputs.push_back(e.path());
    }
  }
  std::sort(inputs.begin(), inputs.end());

  auto number = [](const std::string &s)
  { return s == "NA" ? std::numeric_limits<double>::quiet_NaN() : std::strtod(s.c_str(), nullptr); };
  auto time_text = [&](const std::string &s) { return s == "NA" ? s : fmt(number(s)); };

  for (const auto &file : inputs)
  {
    const std::string stem = file.stem().string();
    const std::string variant = stem.substr(std::string("effectivity_").size());
    std::ifstream in(file);
    std::string line;
    std::getline(in, line);
    std::map<std::string, std::size_t> col;
    {
      std::istringstream hs(line);
      std::string name;
      for (std::size_t j = 0; std::getline(hs, name, ','); j++)
      {
        col[name] = j;
      }
    }
    for (const char *required : {"N", "err", "delta_std", "delta_hier_cert", "eta", "t_std",
                                  "t_hier"})
    {
      if (!col.count(required))
      {
        throw IoError(file.string() + ": missing column " + required);
      }
    }

    struct Sums
    {
      int count = 0;
      double err = 0.0, std = 0.0, hier = 0.0;
    };
    std::map<int, Sums> sums;
    std::ostringstream sstd, shier;
    sstd << "time eta\n";
    shier << "time eta\n";
    while (std::getline(in, line))
    {
      if (line.empty())
      {
        continue;
      }
      std::vector<std::string> f;
      std::istringstream ls(line);
      std::string tok;
      while (std::getline(ls, tok, ','))
      {
        f.push_back(tok);
      }
      const int n = std::stoi(f[col["N"]]);
      const double err = number(f[col["err"]]);
      const double dstd = number(f[col["delta_std"]]);
      const double cert = number(f[col["delta_hier_cert"]]);
      auto &s = sums[n];
      s.count++;
      s.err += err;
      s.std += dstd;
      s.hier += cert;
      if (f[col["eta"]] != "NA")
      {
        shier << time_text(f[col["t_hier"]]) << ' ' << f[col["eta"]] << '\n';
        sstd << time_text(f[col["t_std"]]) << ' ' << fmt(dstd / err) << '\n';
      }
    }
    auto mean = [](double sum, int count)
    { return std::isfinite(sum) ? fmt(sum / count) : std::string("inf"); };
    std::ostringstream fig;
    fig << "N err std hier\n";
    for (const auto &[n, s] : sums)
    {
      fig << n << ' ' << mean(s.err, s.count) << ' ' << mean(s.std, s.count) << ' '
          << mean(s.hier, s.count) << '\n';
    }
    write_file(dir / ("figure_" + variant + ".dat"), fig.str());
    write_file(dir / ("scatter_" + variant + "_std.dat"), sstd.str());
    write_file(dir / ("scatter_" + variant + "_hier.dat"), shier.str());
    log << "figures: " << variant << '\n';
  }
}

RunOutcome theta_tables(const ExperimentConfig &cfg, std::ostream &out)
{
  validate(cfg);
  const fs::path dir = output_path(cfg);
  const auto manifest = read_manifest(dir);
  if (!manifest || manifest->value("config_hash", "") != config_hash(cfg) ||
      !fs::exists(dir / "bases.rbh"))
  {
    return {exit_failure, false, "no offline artifacts for this config in " + dir.string()};
  }
  const TruthModel model = build_model(cfg);
  const SampleSet train = training_set(cfg);
  const TruthCache truth = TruthCache::load_or_compute(model, train, dir / "truth_train.rbh");
  const Container c = Container::load(dir / "bases.rbh");
  BasisStore store(c, model);
  const auto selected = read_indices(c, "selected");
  bool all_valid = true;
  for (const std::string &variant : split_lines(c.text("variants")))
  {
    out << "# " << variant << '\n';
    write_theta_header(out);
    for (const VariantEntry &e : read_entries(c, variant))
    {
      const double theta = entry_theta(model, train, truth, store.basis(e.basis_name),
                                       store.model(e.basis_name), e.n, e.m, selected, cfg);
      write_theta_row(out, e.n, e.m, theta, theta < 1.0);
      all_valid = all_valid && theta < 1.0;
    }
  }
  return {exit_ok, false, all_valid ? "" : "some saturation constants are >= 1"};
}

RunOutcome scm_study(const ExperimentConfig &cfg, std::ostream &log)
{
  validate(cfg);
  const fs::path dir = output_path(cfg);
  fs::create_directories(dir);
  const TruthModel model = build_model(cfg);
  const SampleSet train = training_set(cfg);
  const auto t0 = Clock::now();
  const ScmState state = scm_offline(model, train, scm_config(cfg, model));
  Container c;
  state.save(c, "scm");
  c.save(dir / "scm.rbh");
  std::ostringstream os;
  write_scm_history(os, state, model.parameter_dim());
  write_file(dir / "scm_history.csv", os.str());
  const double gap = state.history().empty() ? 0.0 : state.history().back().gap;
  log << "scm-study: " << state.num_constraints() << " constraints, final gap " << gap << ", "
      << since(t0) << " s\n";
  if (!state.converged())
  {
    return {exit_scm, false,
            "SCM gap " + fmt(gap) + " above tolerance after " +
              std::to_string(state.num_constraints()) + " constraints"};
  }
  return {};
}

}  // namespace rbhier
