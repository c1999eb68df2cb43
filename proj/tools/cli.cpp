#include "cli.hpp"

#include <unistd.h>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>

#include "embedlab/classify.hpp"
#include "embedlab/embed.hpp"
#include "embedlab/error.hpp"
#include "embedlab/structure.hpp"
#include "matrix_io.hpp"
#include "report_json.hpp"

namespace embedlab::cli {

namespace {

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Options {
  std::string file;
  std::string tol;
  std::string bound;
  bool allow_perturb = false;
  std::string branch;
  int root_n = 0;
  std::vector<int> roots{2, 3, 5};
};

double parse_tolerance(const std::string& text, const char* source) {
  std::size_t used = 0;
  double value = 0.0;
  try {
    value = std::stod(text, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used != text.size() || !std::isfinite(value) || !(value > 0.0)) {
    throw UsageError(std::string(source) + " must be a positive number, got \"" + text + "\"");
  }
  return value;
}

std::vector<int> parse_offsets(const std::string& text) {
  std::vector<int> out;
  std::stringstream in(text);
  std::string token;
  while (std::getline(in, token, ',')) {
    std::size_t used = 0;
    int k = 0;
    try {
      k = std::stoi(token, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used == 0 || used != token.size()) throw UsageError("--branch expects integers like 0,1,-1");
    out.push_back(k);
  }
  return out;
}

int verdict_exit(std::string_view verdict_status) {
  if (verdict_status == "positive") return kExitPositive;
  if (verdict_status == "negative") return kExitNegative;
  return kExitUndetermined;
}

std::string status_of(EmbedVerdict v) {
  switch (v) {
    case EmbedVerdict::Embeddable: return "positive";
    case EmbedVerdict::NotEmbeddable: return "negative";
    case EmbedVerdict::Undetermined: break;
  }
  return "undetermined";
}

std::string status_of(DivisibilityVerdict v) {
  switch (v) {
    case DivisibilityVerdict::StronglyInfDivisible: return "positive";
    case DivisibilityVerdict::NotStronglyInfDivisible: return "negative";
    case DivisibilityVerdict::Undetermined: break;
  }
  return "undetermined";
}

bool precondition_kind(ErrorKind k) {
  return k == ErrorKind::NotStochastic || k == ErrorKind::NotNonnegative || k == ErrorKind::NotZMatrix;
}

Json complex_list(const std::vector<Complex>& values) {
  Json out = Json::array();
  for (const Complex& v : values) out.push_back({v.real(), v.imag()});
  return out;
}

// Runs one subcommand and fills report["status"] / report["result"].
void execute(const std::string& command, const Options& o, const RealMatrix& a, const ToleranceConfig& cfg,
             Json& report) {
  if (command == "classify") {
    report["status"] = "success";
    report["result"] = class_report_json(classify_matrix(a, cfg));
  } else if (command == "structure") {
    report["status"] = "success";
    report["result"] = {{"decomposition", structure_json(frobenius_form(a, cfg))},
                        {"necessary_conditions", necessary_json(necessary_conditions(a, cfg))}};
  } else if (command == "expm") {
    report["status"] = "success";
    report["result"] = {{"matrix", matrix_json(expm(a))}};
  } else if (command == "logm") {
    if (o.branch.empty()) {
      report["status"] = "success";
      report["result"] = {{"branch", "principal"}, {"log", matrix_json(logm_principal(a, cfg))}};
      return;
    }
    const std::vector<int> offsets = parse_offsets(o.branch);
    if (static_cast<Eigen::Index>(offsets.size()) != a.rows()) {
      throw UsageError("--branch needs one offset per eigenvalue (" + std::to_string(a.rows()) + ")");
    }
    const Eigendecomposition e = eig(a, cfg);
    const ComplexMatrix z = logm_branch(e, BranchSelection{offsets}, cfg);
    Json result{{"branch", "explicit"}, {"offsets", offsets}, {"eigenvalues", complex_list(e.eigenvalues)}};
    if (auto real = real_if_real(z, cfg)) {
      report["status"] = "success";
      result["log"] = matrix_json(*real);
    } else {
      report["status"] = "negative";
      result["log"] = nullptr;
      result["max_abs_imag"] = z.imag().cwiseAbs().maxCoeff();
    }
    report["result"] = std::move(result);
  } else if (command == "root") {
    report["status"] = "success";
    report["result"] = {{"n", o.root_n}, {"root", matrix_json(primary_root(a, o.root_n, cfg))}};
  } else if (command == "embed") {
    EmbedOptions opts;
    opts.mode = parse_bound_mode(o.bound.empty() ? "israel" : o.bound).value();
    opts.allow_perturb = o.allow_perturb;
    const EmbeddabilityReport r = check_embeddable(a, cfg, opts);
    report["status"] = status_of(r.verdict);
    report["result"] = embed_json(r);
  } else if (command == "infdiv") {
    DivisibilityOptions opts;
    opts.mode = parse_bound_mode(o.bound.empty() ? "general" : o.bound).value();
    opts.allow_perturb = o.allow_perturb;
    opts.roots = o.roots;
    const DivisibilityReport r = check_strong_inf_divisible(a, cfg, opts);
    report["status"] = status_of(r.verdict);
    report["result"] = divisibility_json(r);
  }
}

std::string summary_line(const std::string& command, const Json& report) {
  std::string line = "embedlab " + command + ": " + report.value("status", std::string("?"));
  if (report.contains("result") && report["result"].is_object() && report["result"].contains("verdict")) {
    line += " (" + report["result"]["verdict"].get<std::string>() + " via " +
            report["result"]["method"].get<std::string>() + ")";
  }
  if (report.contains("error")) line += " [" + report["error"]["message"].get<std::string>() + "]";
  return line;
}

CLI::IsMember bound_names() {
  return CLI::IsMember({"israel", "paper", "general", "israel_two_sided", "paper_one_sided", "theorem4_general"});
}

}  // namespace

CliEnvironment environment_from_process() {
  CliEnvironment env;
  if (const char* tol = std::getenv("EMBEDLAB_TOL")) env.tol = tol;
  env.human_summary = ::isatty(::fileno(stderr)) != 0;
  return env;
}

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err, const CliEnvironment& env) {
  const auto started = std::chrono::steady_clock::now();

  CLI::App app{"Embeddability and infinite divisibility checks for stochastic and nonnegative matrices",
               "embedlab"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(library_version()));
  Options o;

  auto common = [&o](CLI::App* sub) {
    sub->add_option("file", o.file, "Matrix file (.json or .csv)")->required();
    sub->add_option("--tol", o.tol, "Entry tolerance; overrides EMBEDLAB_TOL");
  };
  common(app.add_subcommand("classify", "Report matrix class memberships"));
  common(app.add_subcommand("structure", "Frobenius normal form and necessary conditions"));
  common(app.add_subcommand("expm", "Matrix exponential"));
  CLI::App* logm = app.add_subcommand("logm", "Real matrix logarithm (principal, or a chosen branch)");
  common(logm);
  logm->add_option("--branch", o.branch, "Comma-separated offset k per eigenvalue");
  CLI::App* root = app.add_subcommand("root", "Primary n-th root");
  common(root);
  root->add_option("--n", o.root_n, "Root order")->required()->check(CLI::PositiveNumber);
  CLI::App* embed = app.add_subcommand("embed", "Is the stochastic matrix exp of an intensity matrix?");
  common(embed);
  embed->add_option("--bound", o.bound, "Branch window: israel (default), paper or general")
      ->check(bound_names());
  embed->add_flag("--allow-perturb", o.allow_perturb, "Perturb repeated eigenvalues apart when needed");
  CLI::App* infdiv = app.add_subcommand("infdiv", "Is the nonnegative matrix strongly infinitely divisible?");
  common(infdiv);
  infdiv->add_option("--roots", o.roots, "Root orders to demonstrate")->delimiter(',')->check(CLI::PositiveNumber);
  infdiv->add_option("--bound", o.bound, "Branch window: general (default), israel or paper")
      ->check(bound_names());
  infdiv->add_flag("--allow-perturb", o.allow_perturb, "Perturb repeated eigenvalues apart when needed");

  try {
    app.parse(std::vector<std::string>(args.rbegin(), args.rend()));
  } catch (const CLI::Success& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return kExitUsage;
  }
  const std::string command = app.get_subcommands().front()->get_name();

  Json report{{"tool", "embedlab"}, {"version", std::string(library_version())}};
  Json command_echo{{"subcommand", command}, {"argv", args}};
  if (env.tol) command_echo["env"] = {{"EMBEDLAB_TOL", *env.tol}};
  report["command"] = std::move(command_echo);

  auto fail = [&](int code, const std::string& status, const std::string& kind, const std::string& message) {
    report["status"] = status;
    report["error"] = {{"kind", kind}, {"message", message}};
    err << "embedlab: " << message << '\n';
    report["duration_ms"] =
        std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - started).count();
    out << report.dump(2) << '\n';
    return code;
  };

  ToleranceConfig cfg;
  std::string tol_source = "default";
  try {
    if (env.tol) {
      cfg.entry_tol = parse_tolerance(*env.tol, "EMBEDLAB_TOL");
      tol_source = "env";
    }
    if (!o.tol.empty()) {
      cfg.entry_tol = parse_tolerance(o.tol, "--tol");
      tol_source = "flag";
    }
  } catch (const UsageError& e) {
    return fail(kExitUsage, "usage_error", "UsageError", e.what());
  }

  MatrixFile input;
  try {
    input = read_matrix_file(o.file);
  } catch (const FormatError& e) {
    return fail(kExitFormat, "format_error", "FormatError", e.what());
  }

  Json input_echo{{"path", o.file},
                  {"format", std::string(to_string(input.format))},
                  {"n", input.matrix.rows()},
                  {"rows", matrix_json(input.matrix)}};
  if (input.name) input_echo["name"] = *input.name;
  if (input.kind) input_echo["kind"] = *input.kind;
  report["input"] = std::move(input_echo);
  report["tolerances"] = tolerances_json(cfg);
  report["tolerance_source"] = tol_source;

  int code = kExitPositive;
  try {
    execute(command, o, input.matrix, cfg, report);
    const std::string status = report["status"].get<std::string>();
    code = status == "success" ? kExitPositive : verdict_exit(status);
  } catch (const UsageError& e) {
    return fail(kExitUsage, "usage_error", "UsageError", e.what());
  } catch (const Error& e) {
    if (precondition_kind(e.kind())) {
      return fail(kExitFormat, "input_error", std::string(to_string(e.kind())), e.what());
    }
    // Numerical trouble is not a verdict either way.
    report["status"] = "undetermined";
    report["error"] = {{"kind", std::string(to_string(e.kind()))}, {"message", e.what()}};
    code = kExitUndetermined;
  }

  report["duration_ms"] =
      std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - started).count();
  out << report.dump(2) << '\n';
  if (env.human_summary) err << summary_line(command, report) << '\n';
  return code;
}

}  // namespace embedlab::cli
