#include "scns/io.hpp"

#include <bit>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <ctime>
#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "scns/errors.hpp"

namespace scns {

using nlohmann::json;

static_assert(std::endian::native == std::endian::little,
              "snapshot format assumes a little-endian host");

namespace {

[[noreturn]] void fail(const std::string& path, const std::string& what) {
  throw ValidationError("config: " + path + ": " + what);
}

void reject_unknown_keys(const json& obj, const std::set<std::string>& allowed,
                         const std::string& prefix) {
  for (const auto& [key, _] : obj.items())
    if (!allowed.contains(key))
      throw ValidationError("config: unknown key: " + prefix + key);
}

const json& require(const json& obj, const char* key,
                    const std::string& prefix) {
  auto it = obj.find(key);
  if (it == obj.end()) fail(prefix + key, "missing required key");
  return *it;
}

double require_number(const json& obj, const char* key,
                      const std::string& prefix) {
  const json& v = require(obj, key, prefix);
  if (!v.is_number()) fail(prefix + key, "expected a number");
  return v.get<double>();
}

std::string fmt17(double x) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", x);
  return buf;
}

}  // namespace

SimConfig parse_config(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ValidationError(std::string("config: malformed JSON: ") + e.what());
  }
  if (!doc.is_object()) throw ValidationError("config: expected a JSON object");

  // A manifest is a valid config source: unwrap its echo.
  if (doc.contains("config_echo")) doc = doc["config_echo"];

  reject_unknown_keys(doc,
                      {"n_max", "dt", "t_end", "scheme", "project_each_step",
                       "seed", "snapshot_stride", "noise", "initial"},
                      "");

  SimConfig cfg;
  const double n_max = require_number(doc, "n_max", "");
  if (n_max < 1 || n_max != std::floor(n_max) || n_max > 4096)
    fail("n_max", "expected an integer in [1, 4096]");
  cfg.n_max = int(n_max);

  cfg.dt = require_number(doc, "dt", "");
  if (!(cfg.dt > 0.0)) fail("dt", "expected a positive number");
  cfg.t_end = require_number(doc, "t_end", "");
  if (!(cfg.t_end >= cfg.dt)) fail("t_end", "expected t_end >= dt");

  if (doc.contains("scheme")) {
    const auto s = doc["scheme"].is_string()
                       ? doc["scheme"].get<std::string>()
                       : std::string();
    if (s == "splitting")
      cfg.scheme = Scheme::splitting;
    else if (s == "heun")
      cfg.scheme = Scheme::heun;
    else
      fail("scheme", "expected \"splitting\" or \"heun\"");
  }
  if (doc.contains("project_each_step")) {
    if (!doc["project_each_step"].is_boolean())
      fail("project_each_step", "expected a boolean");
    cfg.project_each_step = doc["project_each_step"].get<bool>();
  }
  const json& seed = require(doc, "seed", "");
  if (!seed.is_number_unsigned() && !seed.is_number_integer())
    fail("seed", "expected a non-negative integer");
  cfg.seed = seed.get<std::uint64_t>();
  if (doc.contains("snapshot_stride")) {
    const json& s = doc["snapshot_stride"];
    if (!s.is_number_integer() || s.get<long long>() < 0)
      fail("snapshot_stride", "expected a non-negative integer");
    cfg.snapshot_stride = s.get<int>();
  }

  const json& noise = require(doc, "noise", "");
  if (!noise.is_object()) fail("noise", "expected an object");
  reject_unknown_keys(noise, {"m", "c"}, "noise.");
  const double m = require_number(noise, "m", "noise.");
  if (m < 0 || m != std::floor(m)) fail("noise.m", "expected an integer >= 0");
  const json& cvecs = require(noise, "c", "noise.");
  if (!cvecs.is_array()) fail("noise.c", "expected an array of 2-vectors");
  if (cvecs.size() != std::size_t(m))
    fail("noise.c", "length does not match noise.m");
  std::vector<std::array<double, 2>> c;
  for (std::size_t j = 0; j < cvecs.size(); ++j) {
    const std::string path = "noise.c[" + std::to_string(j) + "]";
    const json& v = cvecs[j];
    if (!v.is_array() || v.size() != 2 || !v[0].is_number() ||
        !v[1].is_number())
      fail(path, "expected [x, y] with two numbers");
    c.push_back({v[0].get<double>(), v[1].get<double>()});
  }
  try {
    cfg.noise = NoiseModel(std::move(c));
  } catch (const ValidationError& e) {
    throw ValidationError(std::string("config: noise.c: ") + e.what());
  }

  const json& initial = require(doc, "initial", "");
  if (!initial.is_object()) fail("initial", "expected an object");
  const auto kind = require(initial, "kind", "initial.").is_string()
                        ? initial["kind"].get<std::string>()
                        : std::string();
  if (kind == "random") {
    reject_unknown_keys(initial, {"kind", "decay", "seed"}, "initial.");
    cfg.initial.kind = InitialSpec::Kind::random;
    cfg.initial.decay = require_number(initial, "decay", "initial.");
    const json& iseed = require(initial, "seed", "initial.");
    if (!iseed.is_number_unsigned() && !iseed.is_number_integer())
      fail("initial.seed", "expected a non-negative integer");
    cfg.initial.seed = iseed.get<std::uint64_t>();
  } else if (kind == "eigenmode") {
    reject_unknown_keys(initial, {"kind", "k"}, "initial.");
    cfg.initial.kind = InitialSpec::Kind::eigenmode;
    const json& k = require(initial, "k", "initial.");
    if (!k.is_array() || k.size() != 2 || !k[0].is_number_integer() ||
        !k[1].is_number_integer())
      fail("initial.k", "expected [k1, k2] with two integers");
    cfg.initial.k = {k[0].get<int>(), k[1].get<int>()};
    if (cfg.initial.k == ModeIndex{0, 0})
      fail("initial.k", "the zero mode is excluded");
    if (std::abs(cfg.initial.k.k1) > cfg.n_max ||
        std::abs(cfg.initial.k.k2) > cfg.n_max)
      fail("initial.k", "mode outside the cutoff");
  } else {
    fail("initial.kind", "expected \"random\" or \"eigenmode\"");
  }

  cfg.steps();  // validates the horizon/step budget
  return cfg;
}

SimConfig load_config(const std::filesystem::path& file) {
  std::ifstream in(file);
  if (!in)
    throw ValidationError("cannot open config file: " + file.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

std::string config_to_json(const SimConfig& cfg) {
  json doc;
  doc["n_max"] = cfg.n_max;
  doc["dt"] = cfg.dt;
  doc["t_end"] = cfg.t_end;
  doc["scheme"] = cfg.scheme == Scheme::splitting ? "splitting" : "heun";
  doc["project_each_step"] = cfg.project_each_step;
  doc["seed"] = cfg.seed;
  doc["snapshot_stride"] = cfg.snapshot_stride;
  json c = json::array();
  for (int j = 0; j < cfg.noise.m(); ++j)
    c.push_back({cfg.noise.c(j)[0], cfg.noise.c(j)[1]});
  doc["noise"] = {{"m", cfg.noise.m()}, {"c", c}};
  if (cfg.initial.kind == InitialSpec::Kind::random)
    doc["initial"] = {{"kind", "random"},
                      {"decay", cfg.initial.decay},
                      {"seed", cfg.initial.seed}};
  else
    doc["initial"] = {{"kind", "eigenmode"},
                      {"k", {cfg.initial.k.k1, cfg.initial.k.k2}}};
  return doc.dump(2);
}

SpectralVelocity make_initial_condition(const SimConfig& cfg) {
  auto space = build_space(cfg.n_max);
  if (cfg.initial.kind == InitialSpec::Kind::random)
    return random_field(cfg.initial.seed, space, cfg.initial.decay);
  return eigenmode_field(space, cfg.initial.k);
}

void write_timeseries(const TrajectoryRecord& traj,
                      const std::filesystem::path& file) {
  std::ofstream out(file);
  if (!out)
    throw ValidationError("cannot open for writing: " + file.string());
  out << "t,h_norm,v_norm_sq,da_norm_sq,dissipation,constraint_err,mu_n\n";
  for (std::size_t i = 0; i < traj.times.size(); ++i) {
    const auto& d = traj.diag[i];
    out << fmt17(traj.times[i]) << ',' << fmt17(d.norm.h) << ','
        << fmt17(d.norm.v_sq) << ',' << fmt17(d.norm.da_sq) << ','
        << fmt17(d.dissipation) << ',' << fmt17(d.constraint_err) << ','
        << fmt17(d.mu) << '\n';
  }
  if (!out) throw ValidationError("write failed: " + file.string());
}

namespace {
constexpr char kMagic[4] = {'S', 'C', 'N', 'S'};

template <typename T>
void put(std::ofstream& out, T v) {
  out.write(reinterpret_cast<const char*>(&v), sizeof(T));
}

template <typename T>
T take(std::ifstream& in, const std::filesystem::path& file) {
  T v;
  in.read(reinterpret_cast<char*>(&v), sizeof(T));
  if (!in)
    throw ValidationError("snapshot truncated or unreadable: " + file.string());
  return v;
}
}  // namespace

void write_snapshot(const SpectralVelocity& u,
                    const std::filesystem::path& file) {
  std::ofstream out(file, std::ios::binary);
  if (!out)
    throw ValidationError("cannot open for writing: " + file.string());
  out.write(kMagic, 4);
  put<std::uint32_t>(out, std::uint32_t(kFormatVersion));
  put<std::int32_t>(out, u.space().n_max());
  put<std::uint64_t>(out, u.space().size());
  for (std::size_t i = 0; i < u.space().size(); ++i) {
    const auto& k = u.space().mode(i);
    put<std::int32_t>(out, k.k1);
    put<std::int32_t>(out, k.k2);
    put<double>(out, u.psi(i).real());
    put<double>(out, u.psi(i).imag());
  }
  if (!out) throw ValidationError("write failed: " + file.string());
}

SpectralVelocity read_snapshot(const std::filesystem::path& file) {
  std::ifstream in(file, std::ios::binary);
  if (!in) throw ValidationError("cannot open snapshot: " + file.string());
  char magic[4];
  in.read(magic, 4);
  if (!in || std::memcmp(magic, kMagic, 4) != 0)
    throw ValidationError("not a snapshot file (bad magic): " + file.string());
  const auto version = take<std::uint32_t>(in, file);
  if (version != std::uint32_t(kFormatVersion))
    throw ValidationError("unsupported snapshot format version " +
                          std::to_string(version) + " (expected " +
                          std::to_string(kFormatVersion) +
                          "): " + file.string());
  const auto n_max = take<std::int32_t>(in, file);
  if (n_max < 1 || n_max > 4096)
    throw ValidationError("snapshot has invalid n_max: " + file.string());
  auto space = build_space(n_max);
  const auto count = take<std::uint64_t>(in, file);
  if (count != space->size())
    throw ValidationError("snapshot mode count mismatch: " + file.string());
  std::vector<Complex> psi(space->size());
  for (std::size_t i = 0; i < space->size(); ++i) {
    const auto k1 = take<std::int32_t>(in, file);
    const auto k2 = take<std::int32_t>(in, file);
    if (space->mode(i).k1 != k1 || space->mode(i).k2 != k2)
      throw ValidationError("snapshot modes out of order: " + file.string());
    const double re = take<double>(in, file);
    const double im = take<double>(in, file);
    psi[i] = Complex{re, im};
  }
  return SpectralVelocity::from_coefficients(std::move(space), std::move(psi));
}

RunManifest make_manifest(const SimConfig& cfg) {
  RunManifest mf;
  mf.config = cfg;
  mf.master_seed = cfg.seed;
  char buf[32];
  const std::time_t now = std::time(nullptr);
  std::tm tm{};
  gmtime_r(&now, &tm);
  std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
  mf.created_at = buf;
  return mf;
}

void write_manifest(const RunManifest& manifest,
                    const std::filesystem::path& file) {
  json doc;
  doc["artifact_version"] = manifest.artifact_version;
  doc["format_version"] = manifest.format_version;
  doc["created_at"] = manifest.created_at;
  doc["master_seed"] = manifest.master_seed;
  doc["config_echo"] = json::parse(config_to_json(manifest.config));
  std::ofstream out(file);
  if (!out)
    throw ValidationError("cannot open for writing: " + file.string());
  out << doc.dump(2) << '\n';
}

void write_ensemble_stats(const EnsembleStats& stats,
                          const std::filesystem::path& csv_file,
                          const std::filesystem::path& summary_file) {
  std::ofstream out(csv_file);
  if (!out)
    throw ValidationError("cannot open for writing: " + csv_file.string());
  out << "t,mean_v_sq,se_v_sq,mean_mu,se_mu";
  for (const double p : stats.p_values) {
    char col[64];
    std::snprintf(col, sizeof(col), ",mean_v_2p_p%g,se_v_2p_p%g", p, p);
    out << col;
  }
  out << '\n';
  for (std::size_t t = 0; t < stats.times.size(); ++t) {
    out << fmt17(stats.times[t]) << ',' << fmt17(stats.mean_v_sq[t]) << ','
        << fmt17(stats.se_v_sq[t]) << ',' << fmt17(stats.mean_mu[t]) << ','
        << fmt17(stats.se_mu[t]);
    for (std::size_t pi = 0; pi < stats.p_values.size(); ++pi)
      out << ',' << fmt17(stats.mean_v_2p[pi][t]) << ','
          << fmt17(stats.se_v_2p[pi][t]);
    out << '\n';
  }
  if (!out) throw ValidationError("write failed: " + csv_file.string());

  json doc;
  doc["n_paths"] = stats.n_paths;
  doc["p_values"] = stats.p_values;
  doc["mean_sup_v_2p"] = stats.mean_sup_v_2p;
  doc["se_sup_v_2p"] = stats.se_sup_v_2p;
  doc["mean_int_da"] = stats.mean_int_da;
  doc["se_int_da"] = stats.se_int_da;
  doc["mean_int_diss"] = stats.mean_int_diss;
  doc["se_int_diss"] = stats.se_int_diss;
  std::ofstream sum(summary_file);
  if (!sum)
    throw ValidationError("cannot open for writing: " + summary_file.string());
  sum << doc.dump(2) << '\n';
}

}  // namespace scns
