#include "srauth/cli.hpp"

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <iomanip>
#include <map>
#include <memory>
#include <ostream>
#include <set>
#include <sstream>

#include "CLI11.hpp"
#include "srauth/analyzer.hpp"
#include "srauth/authsim.hpp"
#include "srauth/config.hpp"
#include "srauth/error.hpp"
#include "srauth/ingest.hpp"
#include "srauth/json_io.hpp"
#include "srauth/phonetics.hpp"
#include "srauth/report.hpp"

namespace srauth::cli {
namespace {

namespace fs = std::filesystem;

struct Globals {
  std::string config;
  bool strict = false;
  bool deterministic = false;
  std::vector<std::string> formats;
  std::string output_dir;
};

// Collects per-file problems so a batch can keep going.
class Problems {
 public:
  explicit Problems(std::ostream& err) : err_(err) {}
  void Add(const std::string& where, const std::string& why) {
    err_ << "error: " << where << ": " << why << "\n";
    ++count_;
  }
  void Warn(const std::string& what) { err_ << "warning: " << what << "\n"; }
  int count() const { return count_; }

 private:
  std::ostream& err_;
  int count_ = 0;
};

fs::path Pick(const std::string& flag, const fs::path& configured) {
  return flag.empty() ? configured : fs::path(flag);
}

// Files named directly, plus *.json directly under named directories.
std::vector<fs::path> ExpandInputs(const std::vector<std::string>& flags, const fs::path& fallback) {
  std::vector<fs::path> roots(flags.begin(), flags.end());
  if (roots.empty() && !fallback.empty()) roots.push_back(fallback);
  std::vector<fs::path> out;
  for (const auto& r : roots) {
    std::error_code ec;
    if (fs::is_directory(r, ec)) {
      auto files = ingest::ListJsonFiles(r);
      out.insert(out.end(), files.begin(), files.end());
    } else {
      out.push_back(r);
    }
  }
  return out;
}

void WriteOutput(const fs::path& path, const std::string& text, std::ostream& err) {
  WriteTextFile(path, text);
  err << "wrote " << path.string() << "\n";
}

report::RenderOptions RenderOpts(const Globals& g) {
  report::RenderOptions opt;
  if (!g.deterministic) opt.generated_at = report::UtcTimestamp();
  return opt;
}

config::RunConfig ResolveConfig(const Globals& g) {
  config::RunConfig c;
  if (!g.config.empty()) c = config::LoadFile(g.config);
  if (!g.formats.empty()) c.formats = config::ParseFormats(g.formats);
  if (!g.output_dir.empty()) c.output_dir = g.output_dir;
  return c;
}

void CheckConfig(const config::RunConfig& c) {
  if (auto v = config::Validate(c); !v.empty()) {
    std::string msg = "invalid configuration:";
    for (const auto& s : v) msg += " " + s + ";";
    throw UsageError(msg);
  }
}

std::vector<ScreenReaderProfile> LoadProfiles(const fs::path& dir, Problems& problems) {
  if (dir.empty()) throw UsageError("no profile directory (use --profiles or paths.profile_dir)");
  std::vector<ScreenReaderProfile> out;
  std::set<std::string> seen;
  for (const auto& p : ingest::ListJsonFiles(dir)) {
    try {
      auto profile = ingest::LoadProfile(p);
      if (!seen.insert(profile.id).second) {
        problems.Add(p.string(), "duplicate profile id '" + profile.id + "'");
        continue;
      }
      out.push_back(std::move(profile));
    } catch (const Error& e) {
      problems.Add(p.string(), e.what());
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// analyze

struct AnalyzeArgs {
  std::vector<std::string> sessions;
  std::vector<std::string> workflows;
  std::string profiles;
  std::string catalog;
};

int CmdAnalyze(const Globals& g, const AnalyzeArgs& a, std::ostream& out, std::ostream& err) {
  const auto cfg = ResolveConfig(g);
  CheckConfig(cfg);
  Problems problems(err);

  std::vector<AuthMethod> catalog;
  if (auto path = Pick(a.catalog, cfg.catalog); !path.empty()) catalog = ingest::LoadCatalog(path);
  const auto profiles = LoadProfiles(Pick(a.profiles, cfg.profile_dir), problems);

  std::map<std::string, WorkflowSpec> workflows;
  for (const auto& p : ExpandInputs(a.workflows, cfg.workflow_dir)) {
    try {
      auto w = ingest::LoadWorkflow(p, catalog);
      const std::string id = w.id;
      if (!workflows.emplace(id, std::move(w)).second) {
        problems.Add(p.string(), "duplicate workflow id '" + id + "'");
      }
    } catch (const Error& e) {
      problems.Add(p.string(), e.what());
    }
  }

  std::vector<SessionRecord> sessions;
  std::vector<fs::path> session_paths;
  for (const auto& p : ExpandInputs(a.sessions, cfg.session_dir)) {
    try {
      auto loaded = ingest::LoadSession(p);
      for (const auto& w : loaded.warnings) problems.Warn(w);
      sessions.push_back(std::move(loaded.value));
      session_paths.push_back(p);
    } catch (const Error& e) {
      problems.Add(p.string(), e.what());
    }
  }

  std::vector<analyzer::AnalysisJob> jobs;
  std::set<std::string> session_ids;
  for (std::size_t i = 0; i < sessions.size(); ++i) {
    const auto& s = sessions[i];
    const std::string where = session_paths[i].string();
    if (!session_ids.insert(s.id).second) {
      problems.Add(where, "duplicate session id '" + s.id + "'");
      continue;
    }
    auto w = workflows.find(s.workflow);
    if (w == workflows.end()) {
      problems.Add(where, "unknown workflow id '" + s.workflow + "'");
      continue;
    }
    const auto reader = analyzer::GoverningReader(s.setting);
    const ScreenReaderProfile* profile = reader ? FindProfile(profiles, *reader) : nullptr;
    if (profile == nullptr) {
      problems.Add(where, "unknown profile id '" + reader.value_or("") + "'");
      continue;
    }
    jobs.push_back({&s, &w->second, profile});
  }

  if (g.strict && problems.count() > 0) {
    err << "aborting (--strict): " << problems.count() << " error(s), nothing written\n";
    return kExitError;
  }

  const auto reports = analyzer::AnalyzeBatch(jobs, cfg.analyzer);
  const auto opt = RenderOpts(g);
  bool findings = false;
  for (const auto& r : reports) {
    findings = findings || !r.findings.empty();
    WriteOutput(cfg.output_dir / "reports" / (r.session_id + ".json"), report::RenderReport(r, opt),
                err);
    out << r.session_id << '\t' << r.method << '\t' << r.reader_key << '\t'
        << (r.findings.empty() ? "-" : r.CodeSet()) << '\t'
        << report::Percent(r.comprehensibility.score) << "%\n";
  }
  const auto issues = report::IssueMatrix(reports);
  const auto comp = report::ComprehensibilityMatrix(reports);
  for (auto f : cfg.formats) {
    const std::string ext(report::Extension(f));
    WriteOutput(cfg.output_dir / "matrices" / ("issues." + ext), report::RenderMatrix(issues, f, opt),
                err);
    WriteOutput(cfg.output_dir / "matrices" / ("comprehensibility." + ext),
                report::RenderMatrix(comp, f, opt), err);
  }
  err << reports.size() << " session(s) analyzed, " << problems.count() << " error(s)\n";
  if (problems.count() > 0) return kExitError;
  return findings ? kExitFindings : kExitOk;
}

// ---------------------------------------------------------------------------
// simulate

struct SimulateArgs {
  std::string catalog;
  std::string profiles;
  std::string settings;
  std::string golden;
  std::vector<std::string> methods;
  std::vector<std::string> setting_kinds;
  std::vector<std::string> readers;
  std::vector<std::string> attacks;
  std::optional<std::uint64_t> seed;
  std::optional<int> exhaustion;
  std::string lockout;
};

int CmdSimulate(const Globals& g, const SimulateArgs& a, std::ostream& out, std::ostream& err) {
  auto cfg = ResolveConfig(g);
  if (a.seed) cfg.sim.rng_seed = *a.seed;
  if (a.exhaustion) cfg.sim.exhaustion_threshold = *a.exhaustion;
  if (a.lockout == "none") {
    cfg.sim.admin_lockout_threshold.reset();
  } else if (!a.lockout.empty()) {
    try {
      cfg.sim.admin_lockout_threshold = std::stoi(a.lockout);
    } catch (const std::exception&) {
      throw UsageError("--lockout expects an integer or 'none'");
    }
  }
  CheckConfig(cfg);
  Problems problems(err);

  const fs::path catalog_path = Pick(a.catalog, cfg.catalog);
  const fs::path settings_path = Pick(a.settings, cfg.settings);
  if (catalog_path.empty()) throw UsageError("no catalog (use --catalog or paths.catalog)");
  if (settings_path.empty()) throw UsageError("no settings file (use --settings or paths.settings)");
  const auto catalog = ingest::LoadCatalog(catalog_path);
  const auto profiles = LoadProfiles(Pick(a.profiles, cfg.profile_dir), problems);
  if (problems.count() > 0) return kExitError;
  auto settings = ingest::LoadSettings(settings_path);

  for (const auto& s : settings) {
    if (auto v = ValidateSettingReaders(s, profiles); !v.empty()) {
      problems.Add(settings_path.string(), v.front());
    }
  }
  for (const auto& r : a.readers) {
    if (FindProfile(profiles, r) == nullptr) problems.Add("--reader", "unknown profile id '" + r + "'");
  }
  for (const auto& m : a.methods) {
    if (FindMethod(catalog, m) == nullptr) problems.Add("--method", "unknown method id '" + m + "'");
  }
  if (problems.count() > 0) return kExitError;

  std::vector<authsim::AttackKind> attacks;
  if (a.attacks.empty()) {
    for (auto k : AllValues<authsim::AttackKind>()) attacks.push_back(k);
  } else {
    for (const auto& name : a.attacks) {
      auto k = EnumFromString<authsim::AttackKind>(name);
      if (!k) throw UsageError("unknown attack '" + name + "'");
      attacks.push_back(*k);
    }
  }
  std::set<SettingKind> kinds;
  for (const auto& name : a.setting_kinds) {
    auto k = EnumFromString<SettingKind>(name);
    if (!k) throw UsageError("unknown setting '" + name + "'");
    kinds.insert(*k);
  }

  std::vector<AuthMethod> methods;
  for (const auto& m : catalog) {
    if (a.methods.empty() ||
        std::find(a.methods.begin(), a.methods.end(), m.id) != a.methods.end()) {
      methods.push_back(m);
    }
  }
  std::erase_if(settings, [&](const PlatformSetting& s) {
    if (!kinds.empty() && !kinds.count(s.kind)) return true;
    if (a.readers.empty()) return false;
    for (const auto& r : a.readers) {
      if (s.terminal_reader == r || s.smartphone_reader == r) return false;
    }
    return true;
  });

  const auto outcomes = authsim::RunMatrix(methods, settings, profiles, attacks, cfg.sim);
  const auto opt = RenderOpts(g);
  for (auto f : cfg.formats) {
    WriteOutput(cfg.output_dir / "matrices" / ("verdicts." + std::string(report::Extension(f))),
                report::RenderOutcomes(outcomes, f, opt), err);
  }
  err << outcomes.size() << " cell(s) simulated\n";

  if (auto golden_path = Pick(a.golden, cfg.golden); !golden_path.empty()) {
    auto golden = report::ParseGolden(ReadTextFile(golden_path));
    // Filters narrow the comparison to the cells actually simulated.
    std::erase_if(golden, [&](const report::GoldenCell& c) {
      return FindMethod(methods, c.method) == nullptr ||
             std::find(settings.begin(), settings.end(), c.setting) == settings.end() ||
             std::find(attacks.begin(), attacks.end(), c.attack) == attacks.end();
    });
    const auto diffs = report::CompareToGolden(outcomes, golden);
    for (const auto& d : diffs) out << "MISMATCH " << d << "\n";
    out << "golden: " << (golden.size() - diffs.size()) << "/" << golden.size()
        << " cells match\n";
    if (!diffs.empty()) return kExitFindings;
  } else {
    out << report::RenderOutcomes(outcomes, report::Format::kCsv, opt);
  }
  return kExitOk;
}

// ---------------------------------------------------------------------------
// phish

struct PhishArgs {
  std::string candidate;
  std::string trusted;
  std::optional<double> threshold;
};

int CmdPhish(const Globals& g, const PhishArgs& a, std::ostream& out, std::ostream&) {
  auto cfg = ResolveConfig(g);
  if (a.threshold) cfg.phish_threshold = *a.threshold;
  CheckConfig(cfg);
  const auto trusted = phonetics::ParseTrustedList(ReadTextFile(a.trusted));
  if (trusted.empty()) throw UsageError("trusted list '" + a.trusted + "' is empty");
  std::vector<phonetics::LookalikeFlag> flags;
  try {
    flags = phonetics::FlagLookalikes(a.candidate, trusted, cfg.phish_threshold);
  } catch (const Error& e) {
    throw UsageError(e.what());
  }
  std::ostringstream line;
  line << std::fixed << std::setprecision(3);
  for (const auto& f : flags) {
    line << "FLAG " << a.candidate << " sounds like " << f.trusted_domain
         << " (similarity " << f.similarity << ")\n";
  }
  out << line.str();
  if (flags.empty()) out << "ok " << a.candidate << "\n";
  return flags.empty() ? kExitOk : kExitFindings;
}

// ---------------------------------------------------------------------------
// transcribe

struct TranscribeArgs {
  std::vector<std::string> manifests;
  std::string backend;
  std::string endpoint;
  std::optional<double> timeout;
  std::optional<double> confidence_floor;
};

int CmdTranscribe(const Globals& g, const TranscribeArgs& a, std::ostream& out,
                  std::ostream& err) {
  auto cfg = ResolveConfig(g);
  if (a.backend == "replay") {
    cfg.stt = config::SttKind::kReplay;
  } else if (a.backend == "http") {
    cfg.stt = config::SttKind::kHttp;
  } else if (!a.backend.empty()) {
    throw UsageError("--backend expects replay or http");
  }
  if (!a.endpoint.empty()) cfg.stt_endpoint = a.endpoint;
  if (a.timeout) cfg.stt_timeout_s = *a.timeout;
  if (a.confidence_floor) cfg.confidence_floor = *a.confidence_floor;
  CheckConfig(cfg);

  std::unique_ptr<ingest::SttBackend> backend;
  if (cfg.stt == config::SttKind::kHttp) {
    ingest::HttpBackendOptions o;
    o.endpoint = cfg.stt_endpoint;
    o.timeout_s = cfg.stt_timeout_s;
    if (!cfg.stt_token_env.empty()) {
      if (const char* token = std::getenv(cfg.stt_token_env.c_str())) o.bearer_token = token;
    }
    backend = std::make_unique<ingest::HttpBackend>(o);
  } else {
    backend = std::make_unique<ingest::ReplayBackend>();
  }

  Problems problems(err);
  std::vector<std::pair<fs::path, std::string>> pending;
  for (const auto& m : a.manifests) {
    try {
      auto manifest = ingest::LoadManifest(m);
      manifest.options.confidence_floor = cfg.confidence_floor;
      auto result = ingest::TranscribeSession(manifest.inputs, *backend, manifest.options);
      for (const auto& w : result.warnings) problems.Warn(w);
      pending.emplace_back(cfg.output_dir / "sessions" / (result.value.id + ".json"),
                           ToJson(result.value).dump(2));
      out << result.value.id << '\t' << result.value.events.size() << " event(s)\n";
    } catch (const TransportError& e) {
      problems.Add(m, std::string(e.what()) + (e.retryable() ? " (retryable)" : ""));
    } catch (const Error& e) {
      problems.Add(m, e.what());
    }
  }
  if (g.strict && problems.count() > 0) {
    err << "aborting (--strict): nothing written\n";
    return kExitError;
  }
  for (const auto& [path, text] : pending) WriteOutput(path, text, err);
  return problems.count() > 0 ? kExitError : kExitOk;
}

// ---------------------------------------------------------------------------
// validate

struct ValidateArgs {
  std::vector<std::string> workflows;
  std::vector<std::string> sessions;
  std::string profiles;
  std::string catalog;
  std::string settings;
};

int CmdValidate(const Globals& g, const ValidateArgs& a, std::ostream& out, std::ostream& err) {
  const auto cfg = ResolveConfig(g);
  CheckConfig(cfg);
  Problems problems(err);
  auto check = [&](const fs::path& p, auto&& load) {
    try {
      load();
      out << "ok " << p.string() << "\n";
    } catch (const Error& e) {
      problems.Add(p.string(), e.what());
    }
  };

  std::vector<AuthMethod> catalog;
  if (auto p = Pick(a.catalog, cfg.catalog); !p.empty()) {
    check(p, [&] { catalog = ingest::LoadCatalog(p); });
  }
  std::vector<ScreenReaderProfile> profiles;
  if (auto dir = Pick(a.profiles, cfg.profile_dir); !dir.empty()) {
    for (const auto& p : ingest::ListJsonFiles(dir)) {
      check(p, [&] { profiles.push_back(ingest::LoadProfile(p)); });
    }
  }
  if (auto p = Pick(a.settings, cfg.settings); !p.empty()) {
    check(p, [&] {
      for (const auto& s : ingest::LoadSettings(p)) {
        if (profiles.empty()) continue;
        if (auto v = ValidateSettingReaders(s, profiles); !v.empty()) throw ValidationError(v);
      }
    });
  }
  for (const auto& p : ExpandInputs(a.workflows, cfg.workflow_dir)) {
    check(p, [&] { ingest::LoadWorkflow(p, catalog); });
  }
  for (const auto& p : ExpandInputs(a.sessions, cfg.session_dir)) {
    check(p, [&] {
      for (const auto& w : ingest::LoadSession(p).warnings) problems.Warn(w);
    });
  }
  return problems.count() > 0 ? kExitError : kExitOk;
}

}  // namespace

int Run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Screen-reader authentication audit toolkit", "srauth"};
  app.require_subcommand(1);
  app.fallthrough();

  Globals g;
  app.add_option("--config", g.config, "TOML-style configuration file");
  app.add_flag("--strict", g.strict, "Abort on the first load or validation error");
  app.add_flag("--deterministic", g.deterministic, "Omit timestamps from outputs");
  app.add_option("--format", g.formats, "Output formats: json, csv, markdown")->delimiter(',');
  app.add_option("--output-dir", g.output_dir, "Output root (reports/, matrices/, sessions/)");

  AnalyzeArgs aa;
  auto* analyze = app.add_subcommand("analyze", "Detect communicability issues in sessions");
  analyze->add_option("--sessions", aa.sessions, "Session files or directories");
  analyze->add_option("--workflows", aa.workflows, "Workflow files or directories");
  analyze->add_option("--profiles", aa.profiles, "Profile directory");
  analyze->add_option("--catalog", aa.catalog, "Method catalog");

  SimulateArgs sa;
  auto* simulate = app.add_subcommand("simulate", "Run the attack matrix");
  simulate->add_option("--catalog", sa.catalog, "Method catalog");
  simulate->add_option("--profiles", sa.profiles, "Profile directory");
  simulate->add_option("--settings", sa.settings, "Platform settings file");
  simulate->add_option("--golden", sa.golden, "Compare against a golden verdict CSV");
  simulate->add_option("--method", sa.methods, "Restrict to method ids");
  simulate->add_option("--setting", sa.setting_kinds, "Restrict to TERMINAL/SMARTPHONE/CONCURRENT");
  simulate->add_option("--reader", sa.readers, "Restrict to settings using these profile ids");
  simulate->add_option("--attack", sa.attacks, "Restrict to attack kinds");
  simulate->add_option("--seed", sa.seed, "Tie-break seed");
  simulate->add_option("--exhaustion-threshold", sa.exhaustion, "Push ordinal the user accepts");
  simulate->add_option("--lockout", sa.lockout, "Admin lockout threshold, or 'none'");

  PhishArgs pa;
  auto* phish = app.add_subcommand("phish", "Flag domains that sound like trusted ones");
  phish->add_option("candidate", pa.candidate, "Domain to check")->required();
  phish->add_option("--trusted", pa.trusted, "Trusted domain list")->required();
  phish->add_option("--threshold", pa.threshold, "Spoken similarity threshold");

  TranscribeArgs ta;
  auto* transcribe = app.add_subcommand("transcribe", "Build sessions from recordings");
  transcribe->add_option("manifests", ta.manifests, "Transcribe manifests")->required();
  transcribe->add_option("--backend", ta.backend, "replay or http");
  transcribe->add_option("--endpoint", ta.endpoint, "HTTP backend URL");
  transcribe->add_option("--timeout", ta.timeout, "HTTP timeout in seconds");
  transcribe->add_option("--confidence-floor", ta.confidence_floor, "Flag segments below this");

  ValidateArgs va;
  auto* validate = app.add_subcommand("validate", "Check input files");
  validate->add_option("--workflows", va.workflows, "Workflow files or directories");
  validate->add_option("--sessions", va.sessions, "Session files or directories");
  validate->add_option("--profiles", va.profiles, "Profile directory");
  validate->add_option("--catalog", va.catalog, "Method catalog");
  validate->add_option("--settings", va.settings, "Platform settings file");

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) {
      out << app.help();
      return kExitOk;
    }
    err << "usage error: " << e.what() << "\n";
    return kExitUsage;
  }

  try {
    if (*analyze) return CmdAnalyze(g, aa, out, err);
    if (*simulate) return CmdSimulate(g, sa, out, err);
    if (*phish) return CmdPhish(g, pa, out, err);
    if (*transcribe) return CmdTranscribe(g, ta, out, err);
    if (*validate) return CmdValidate(g, va, out, err);
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitError;
  }
  return kExitUsage;
}

}  // namespace srauth::cli
