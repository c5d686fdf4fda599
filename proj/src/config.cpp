// SPDX-License-Identifier: Apache-2.0

#include "rbhier/config.hpp"

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>
#include <openssl/evp.h>
#include "rbhier/benchmarks.hpp"

namespace rbhier
{

namespace
{

namespace pt = boost::property_tree;

const std::map<std::string, std::set<std::string>> &schema()
{
  static const std::map<std::string, std::set<std::string>> s{
    {"problem",
     {"name", "lower", "upper", "cells_per_side", "elements", "degree", "source", "robin",
      "reference_wavenumber"}},
    {"train", {"points_per_dim"}},
    {"test", {"size", "seed"}},
    {"sampling", {"method", "n_max", "tol", "drop_tol", "k_max", "first_index"}},
    {"estimator",
     {"m_rules", "taylor_orders", "beta_source", "theta_method", "initial_guess", "exclude_tol",
      "reproduced_tol", "theta_tol"}},
    {"scm", {"mode", "m_alpha", "m_plus", "tol", "k_max", "route"}},
    {"output", {"directory", "timing"}},
  };
  return s;
}

std::string fmt(double v)
{
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

template <typename T>
std::string join(const T &values)
{
  std::string out;
  for (const auto &v : values)
  {
    if (!out.empty())
    {
      out += ' ';
    }
    if constexpr (std::is_floating_point_v<std::decay_t<decltype(v)>>)
    {
      out += fmt(v);
    }
    else
    {
      out += std::to_string(v);
    }
  }
  return out;
}

// Typed access with the key path in every error message.
class Reader
{
public:
  explicit Reader(const pt::ptree &tree) : tree_(tree) {}

  const std::string *raw(const std::string &section, const std::string &key) const
  {
    const auto sec = tree_.get_child_optional(pt::ptree::path_type(section, '\0'));
    if (!sec)
    {
      return nullptr;
    }
    const auto it = sec->find(key);
    return it == sec->not_found() ? nullptr : &it->second.data();
  }

  [[noreturn]] static void bad(const std::string &section, const std::string &key,
                               const std::string &value, const std::string &what)
  {
    throw ConfigError(section + "." + key + " = '" + value + "': " + what);
  }

  void get(const std::string &s, const std::string &k, double &out) const
  {
    if (const auto *v = raw(s, k))
    {
      out = to_double(s, k, *v);
    }
  }

  void get(const std::string &s, const std::string &k, int &out) const
  {
    if (const auto *v = raw(s, k))
    {
      out = static_cast<int>(to_integer(s, k, *v));
    }
  }

  void get(const std::string &s, const std::string &k, std::uint64_t &out) const
  {
    if (const auto *v = raw(s, k))
    {
      try
      {
        std::size_t pos = 0;
        out = std::stoull(*v, &pos);
        if (pos != v->size() || v->find('-') != std::string::npos)
        {
          throw std::invalid_argument("trailing");
        }
      }
      catch (const std::exception &)
      {
        bad(s, k, *v, "expected an unsigned integer");
      }
    }
  }

  void get(const std::string &s, const std::string &k, bool &out) const
  {
    if (const auto *v = raw(s, k))
    {
      if (*v == "true")
      {
        out = true;
      }
      else if (*v == "false")
      {
        out = false;
      }
      else
      {
        bad(s, k, *v, "expected true or false");
      }
    }
  }

  void get(const std::string &s, const std::string &k, std::string &out) const
  {
    if (const auto *v = raw(s, k))
    {
      out = *v;
    }
  }

  void get(const std::string &s, const std::string &k, std::vector<int> &out) const
  {
    if (const auto *v = raw(s, k))
    {
      out.clear();
      std::istringstream is(*v);
      std::string tok;
      while (is >> tok)
      {
        out.push_back(static_cast<int>(to_integer(s, k, tok)));
      }
    }
  }

  void get(const std::string &s, const std::string &k, RealVector &out) const
  {
    if (const auto *v = raw(s, k))
    {
      std::vector<double> vals;
      std::istringstream is(*v);
      std::string tok;
      while (is >> tok)
      {
        vals.push_back(to_double(s, k, tok));
      }
      out = Eigen::Map<RealVector>(vals.data(), static_cast<Eigen::Index>(vals.size()));
    }
  }

  template <typename E>
  void get_enum(const std::string &s, const std::string &k, E &out,
                const std::map<std::string, E> &names) const
  {
    if (const auto *v = raw(s, k))
    {
      const auto it = names.find(*v);
      if (it == names.end())
      {
        std::string allowed;
        for (const auto &[n, e] : names)
        {
          allowed += (allowed.empty() ? "" : ", ") + n;
        }
        bad(s, k, *v, "expected one of " + allowed);
      }
      out = it->second;
    }
  }

private:
  static double to_double(const std::string &s, const std::string &k, const std::string &v)
  {
    try
    {
      std::size_t pos = 0;
      const double d = std::stod(v, &pos);
      if (pos == v.size())
      {
        return d;
      }
    }
    catch (const std::exception &)
    {
    }
    bad(s, k, v, "expected a number");
  }

  static long long to_integer(const std::string &s, const std::string &k, const std::string &v)
  {
    try
    {
      std::size_t pos = 0;
      const long long i = std::stoll(v, &pos);
      if (pos == v.size())
      {
        return i;
      }
    }
    catch (const std::exception &)
    {
    }
    bad(s, k, v, "expected an integer");
  }

  const pt::ptree &tree_;
};

const std::map<std::string, Problem> problem_names{{"thermal_block", Problem::thermal_block},
                                                   {"helmholtz", Problem::helmholtz}};
const std::map<std::string, Sampling> sampling_names{{"strong", Sampling::strong},
                                                     {"weak_std", Sampling::weak_std},
                                                     {"weak_hier", Sampling::weak_hier}};
const std::map<std::string, BetaSource> beta_names{{"exact_eig", BetaSource::exact_eig},
                                                   {"scm", BetaSource::scm},
                                                   {"min_theta", BetaSource::min_theta}};
const std::map<std::string, ThetaMethod> theta_names{{"train_ratio", ThetaMethod::train_ratio},
                                                     {"dinkelbach", ThetaMethod::dinkelbach}};
const std::map<std::string, InitialGuess> guess_names{
  {"ratio_max", InitialGuess::ratio_max}, {"argmax_then_error", InitialGuess::argmax_then_error}};
const std::map<std::string, ScmModeChoice> scm_names{{"auto", ScmModeChoice::automatic},
                                                     {"coercive", ScmModeChoice::coercive},
                                                     {"infsup_squared",
                                                      ScmModeChoice::infsup_squared}};
const std::map<std::string, EigenRoute> route_names{{"auto", EigenRoute::automatic},
                                                    {"dense", EigenRoute::dense},
                                                    {"iterative", EigenRoute::iterative}};

template <typename E>
std::string name_of(E value, const std::map<std::string, E> &names)
{
  for (const auto &[n, e] : names)
  {
    if (e == value)
    {
      return n;
    }
  }
  return "?";
}

void check_keys(const pt::ptree &tree)
{
  for (const auto &[section, child] : tree)
  {
    const auto it = schema().find(section);
    if (it == schema().end())
    {
      throw ConfigError("unknown section [" + section + "]");
    }
    if (!child.data().empty() && child.empty())
    {
      throw ConfigError("key '" + section + "' outside of a section");
    }
    for (const auto &[key, value] : child)
    {
      if (!it->second.count(key))
      {
        throw ConfigError("unknown key " + section + "." + key);
      }
    }
  }
}

ExperimentConfig from_tree(const pt::ptree &tree)
{
  check_keys(tree);
  const Reader r(tree);
  ExperimentConfig c;
  r.get_enum("problem", "name", c.problem, problem_names);
  // Range defaults depend on the problem.
  if (c.problem == Problem::thermal_block)
  {
    c.lower = RealVector::Constant(2, 0.5);
    c.upper = RealVector::Constant(2, 1.0);
  }
  else
  {
    c.lower = RealVector::Constant(1, 90.0);
    c.upper = RealVector::Constant(1, 100.0);
    c.train_points = {201};
  }
  r.get("problem", "lower", c.lower);
  r.get("problem", "upper", c.upper);
  r.get("problem", "cells_per_side", c.cells_per_side);
  r.get("problem", "elements", c.elements);
  r.get("problem", "degree", c.degree);
  r.get("problem", "source", c.source);
  r.get("problem", "robin", c.robin);
  if (r.raw("problem", "reference_wavenumber"))
  {
    double v = 0.0;
    r.get("problem", "reference_wavenumber", v);
    c.reference_wavenumber = v;
  }
  r.get("train", "points_per_dim", c.train_points);
  r.get("test", "size", c.test_size);
  r.get("test", "seed", c.test_seed);
  r.get_enum("sampling", "method", c.sampling, sampling_names);
  r.get("sampling", "n_max", c.n_max);
  r.get("sampling", "tol", c.greedy_tol);
  r.get("sampling", "drop_tol", c.drop_tol);
  r.get("sampling", "k_max", c.k_max);
  std::uint64_t first = c.first_index;
  r.get("sampling", "first_index", first);
  c.first_index = static_cast<std::size_t>(first);
  r.get("estimator", "m_rules", c.m_rules);
  r.get("estimator", "taylor_orders", c.taylor_orders);
  r.get_enum("estimator", "beta_source", c.beta_source, beta_names);
  r.get_enum("estimator", "theta_method", c.theta_method, theta_names);
  r.get_enum("estimator", "initial_guess", c.initial_guess, guess_names);
  r.get("estimator", "exclude_tol", c.exclude_tol);
  r.get("estimator", "reproduced_tol", c.reproduced_tol);
  r.get("estimator", "theta_tol", c.theta_tol);
  r.get_enum("scm", "mode", c.scm_mode, scm_names);
  r.get("scm", "m_alpha", c.scm_m_alpha);
  r.get("scm", "m_plus", c.scm_m_plus);
  r.get("scm", "tol", c.scm_tol);
  r.get("scm", "k_max", c.scm_k_max);
  r.get_enum("scm", "route", c.route, route_names);
  r.get("output", "directory", c.directory);
  r.get("output", "timing", c.timing);
  validate(c);
  return c;
}

pt::ptree read_tree(std::istream &is)
{
  pt::ptree tree;
  try
  {
    pt::read_ini(is, tree);
  }
  catch (const pt::ini_parser_error &e)
  {
    throw ConfigError("config syntax: " + std::string(e.what()));
  }
  return tree;
}

}  // namespace

void validate(const ExperimentConfig &c)
{
  auto require = [](bool ok, const std::string &what)
  {
    if (!ok)
    {
      throw ConfigError(what);
    }
  };
  const Eigen::Index P = c.problem == Problem::thermal_block ? 2 : 1;
  require(c.lower.size() == P && c.upper.size() == P,
          "problem.lower/upper: expected " + std::to_string(P) + " values");
  require((c.lower.array() < c.upper.array()).all(), "problem: lower must be below upper");
  if (c.problem == Problem::thermal_block)
  {
    require((c.lower.array() > 0.0).all(), "problem.lower: conductivities must be positive");
    require(c.cells_per_side >= 3 && c.cells_per_side % 3 == 0,
            "problem.cells_per_side: positive multiple of 3 expected");
  }
  else
  {
    require((c.lower.array() > 0.0).all(), "problem.lower: wavenumbers must be positive");
    require(c.elements >= 1 && c.degree >= 1, "problem.elements/degree must be positive");
  }
  require(static_cast<Eigen::Index>(c.train_points.size()) == P,
          "train.points_per_dim: one count per parameter expected");
  for (int n : c.train_points)
  {
    require(n >= 2, "train.points_per_dim: at least 2 points per direction");
  }
  require(c.test_size >= 1, "test.size must be positive");
  require(c.n_max >= 1, "sampling.n_max must be positive");
  require(c.greedy_tol >= 0.0, "sampling.tol must be nonnegative");
  require(c.drop_tol > 0.0 && c.drop_tol < 1.0, "sampling.drop_tol must lie in (0, 1)");
  require(c.k_max >= 1, "sampling.k_max must be positive");
  std::size_t train_size = 1;
  for (int n : c.train_points)
  {
    train_size *= static_cast<std::size_t>(n);
  }
  require(c.first_index < train_size, "sampling.first_index outside the training set");
  for (int r : c.m_rules)
  {
    require(r >= 1 && r <= 3, "estimator.m_rules: values in {1, 2, 3}");
  }
  for (int k : c.taylor_orders)
  {
    require(k >= 1, "estimator.taylor_orders: orders must be positive");
  }
  require(c.exclude_tol >= 0.0 && c.reproduced_tol >= 0.0,
          "estimator: exclusion tolerances must be nonnegative");
  require(c.scm_m_alpha >= 1 && c.scm_m_plus >= 0 && c.scm_k_max >= 1 && c.scm_tol > 0.0,
          "scm: invalid settings");
  require(!(c.problem == Problem::helmholtz && c.beta_source == BetaSource::min_theta),
          "estimator.beta_source = min_theta needs real positive coefficients (thermal block)");
  require(!(c.problem == Problem::helmholtz && c.scm_mode == ScmModeChoice::coercive),
          "scm.mode = coercive does not apply to the Helmholtz operator");
  require(!c.directory.empty(), "output.directory must not be empty");
  if (c.reference_wavenumber)
  {
    require(*c.reference_wavenumber > 0.0, "problem.reference_wavenumber must be positive");
  }
}

ExperimentConfig parse_config(std::istream &is) { return from_tree(read_tree(is)); }

ExperimentConfig load_config(const std::filesystem::path &file)
{
  std::ifstream in(file);
  if (!in)
  {
    throw ConfigError("cannot open config file " + file.string());
  }
  return parse_config(in);
}

std::string serialize(const ExperimentConfig &c)
{
  std::ostringstream os;
  os << "[problem]\n";
  os << "name = " << name_of(c.problem, problem_names) << '\n';
  os << "lower = " << join(std::vector<double>(c.lower.begin(), c.lower.end())) << '\n';
  os << "upper = " << join(std::vector<double>(c.upper.begin(), c.upper.end())) << '\n';
  os << "cells_per_side = " << c.cells_per_side << '\n';
  os << "elements = " << c.elements << '\n';
  os << "degree = " << c.degree << '\n';
  os << "source = " << fmt(c.source) << '\n';
  os << "robin = " << fmt(c.robin) << '\n';
  if (c.reference_wavenumber)
  {
    os << "reference_wavenumber = " << fmt(*c.reference_wavenumber) << '\n';
  }
  os << "\n[train]\n";
  os << "points_per_dim = " << join(c.train_points) << '\n';
  os << "\n[test]\n";
  os << "size = " << c.test_size << '\n';
  os << "seed = " << c.test_seed << '\n';
  os << "\n[sampling]\n";
  os << "method = " << name_of(c.sampling, sampling_names) << '\n';
  os << "n_max = " << c.n_max << '\n';
  os << "tol = " << fmt(c.greedy_tol) << '\n';
  os << "drop_tol = " << fmt(c.drop_tol) << '\n';
  os << "k_max = " << c.k_max << '\n';
  os << "first_index = " << c.first_index << '\n';
  os << "\n[estimator]\n";
  os << "m_rules = " << join(c.m_rules) << '\n';
  os << "taylor_orders = " << join(c.taylor_orders) << '\n';
  os << "beta_source = " << name_of(c.beta_source, beta_names) << '\n';
  os << "theta_method = " << name_of(c.theta_method, theta_names) << '\n';
  os << "initial_guess = " << name_of(c.initial_guess, guess_names) << '\n';
  os << "exclude_tol = " << fmt(c.exclude_tol) << '\n';
  os << "reproduced_tol = " << fmt(c.reproduced_tol) << '\n';
  os << "theta_tol = " << fmt(c.theta_tol) << '\n';
  os << "\n[scm]\n";
  os << "mode = " << name_of(c.scm_mode, scm_names) << '\n';
  os << "m_alpha = " << c.scm_m_alpha << '\n';
  os << "m_plus = " << c.scm_m_plus << '\n';
  os << "tol = " << fmt(c.scm_tol) << '\n';
  os << "k_max = " << c.scm_k_max << '\n';
  os << "route = " << name_of(c.route, route_names) << '\n';
  os << "\n[output]\n";
  os << "directory = " << c.directory << '\n';
  os << "timing = " << (c.timing ? "true" : "false") << '\n';
  return os.str();
}

std::string config_hash(const ExperimentConfig &cfg)
{
  const std::string text = serialize(cfg);
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(text.data(), text.size(), digest, &len, EVP_sha256(), nullptr) != 1)
  {
    throw Error("config_hash: SHA-256 failed");
  }
  std::string hex;
  char buf[3];
  for (unsigned int i = 0; i < len; i++)
  {
    std::snprintf(buf, sizeof buf, "%02x", digest[i]);
    hex += buf;
  }
  return hex;
}

void apply_override(ExperimentConfig &cfg, const std::string &assignment)
{
  const auto eq = assignment.find('=');
  const auto dot = assignment.find('.');
  if (eq == std::string::npos || dot == std::string::npos || dot > eq)
  {
    throw ConfigError("override '" + assignment + "': expected section.key=value");
  }
  auto trim = [](std::string s)
  {
    const auto a = s.find_first_not_of(" \t");
    const auto b = s.find_last_not_of(" \t");
    return a == std::string::npos ? std::string() : s.substr(a, b - a + 1);
  };
  const std::string section = trim(assignment.substr(0, dot));
  const std::string key = trim(assignment.substr(dot + 1, eq - dot - 1));
  const std::string value = trim(assignment.substr(eq + 1));

  std::istringstream is(serialize(cfg));
  pt::ptree tree = read_tree(is);
  if (!schema().count(section) || !schema().at(section).count(key))
  {
    throw ConfigError("unknown key " + section + "." + key);
  }
  // Switching the problem resets the range defaults, so drop values tied to the old one.
  if (section == "problem" && key == "name")
  {
    auto &p = tree.get_child("problem");
    for (const char *k : {"lower", "upper"})
    {
      p.erase(k);
    }
    tree.erase("train");
  }
  tree.put(pt::ptree::path_type(section + '\x01' + key, '\x01'), value);
  cfg = from_tree(tree);
}

std::filesystem::path output_path(const ExperimentConfig &cfg)
{
  const std::filesystem::path dir(cfg.directory);
  if (dir.is_absolute())
  {
    return dir;
  }
  const char *root = std::getenv("RBHIER_OUTPUT_ROOT");
  return (root != nullptr && *root != '\0') ? std::filesystem::path(root) / dir : dir;
}

ParameterDomain parameter_domain(const ExperimentConfig &cfg)
{
  return ParameterDomain(cfg.lower, cfg.upper);
}

TruthModel build_model(const ExperimentConfig &cfg)
{
  if (cfg.problem == Problem::thermal_block)
  {
    return build_thermal_block({cfg.cells_per_side});
  }
  HelmholtzConfig h;
  h.elements = cfg.elements;
  h.degree = cfg.degree;
  h.source = cfg.source;
  h.robin = cfg.robin;
  h.reference_wavenumber = cfg.reference_wavenumber.value_or(0.5 * (cfg.lower[0] + cfg.upper[0]));
  return build_helmholtz_1d(h);
}

SampleSet training_set(const ExperimentConfig &cfg)
{
  return tensor_grid(parameter_domain(cfg), cfg.train_points);
}

SampleSet test_set(const ExperimentConfig &cfg)
{
  return random_sample(parameter_domain(cfg), cfg.test_size, cfg.test_seed);
}

ScmConfig scm_config(const ExperimentConfig &cfg, const TruthModel &model)
{
  ScmConfig s;
  switch (cfg.scm_mode)
  {
  case ScmModeChoice::coercive:
    s.mode = ScmMode::coercive;
    break;
  case ScmModeChoice::infsup_squared:
    s.mode = ScmMode::infsup_squared;
    break;
  case ScmModeChoice::automatic:
    s.mode = model.field() == Field::real ? ScmMode::coercive : ScmMode::infsup_squared;
    break;
  }
  s.m_alpha = cfg.scm_m_alpha;
  s.m_plus = cfg.scm_m_plus;
  s.tol = cfg.scm_tol;
  s.k_max = cfg.scm_k_max;
  s.route = cfg.route;
  return s;
}

std::string to_string(Problem p) { return name_of(p, problem_names); }
std::string to_string(Sampling s) { return name_of(s, sampling_names); }
std::string to_string(BetaSource b) { return name_of(b, beta_names); }

}  // namespace rbhier
