// regime-gauge: batch diagnostics for model-capacity selection under
// distribution shift. Every subcommand is deterministic given --seed and
// embeds the tool version and its resolved configuration in the output.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "rgauge/dataset.hpp"
#include "rgauge/deff.hpp"
#include "rgauge/evaluation.hpp"
#include "rgauge/models.hpp"
#include "rgauge/rate_reduction.hpp"
#include "rgauge/regime_index.hpp"
#include "rgauge/report.hpp"
#include "rgauge/simulate.hpp"
#include "rgauge/synthesis_stats.hpp"
#include "rgauge/version.hpp"
#include "rgauge/viability.hpp"

namespace {

using nlohmann::json;

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitAdoptComplexity = 2;
constexpr int kExitDataError = 3;

void write_output(const std::string& path, const std::string& content) {
  if (path.empty() || path == "-") {
    std::cout << content;
    return;
  }
  std::ofstream file(path, std::ios::binary);
  if (!file) throw std::runtime_error("cannot write '" + path + "'");
  file << content;
}

std::string render_json(const json& payload) { return payload.dump(2) + "\n"; }

json with_meta(json payload, json config) {
  payload["version"] = rgauge::kVersion;
  payload["config"] = std::move(config);
  return payload;
}

std::string fmt(double value) {
  char buffer[64];
  std::snprintf(buffer, sizeof(buffer), "%.10g", value);
  return buffer;
}

std::string csv_preamble(const json& config) {
  std::string out = std::string("# version=") + rgauge::kVersion + "\n";
  out += "# config=" + config.dump() + "\n";
  return out;
}

json read_json_file(const std::string& path) {
  std::ifstream file(path);
  if (!file) throw std::runtime_error("cannot open '" + path + "'");
  json doc;
  file >> doc;
  return doc;
}

std::vector<double> parse_double_list(const std::string& csv) {
  std::vector<double> out;
  std::stringstream stream(csv);
  std::string item;
  while (std::getline(stream, item, ',')) {
    if (!item.empty()) out.push_back(std::stod(item));
  }
  if (out.empty()) throw std::runtime_error("expected a comma-separated list, got '" + csv + "'");
  return out;
}

std::vector<int> parse_int_list(const std::string& csv) {
  std::vector<int> out;
  for (double v : parse_double_list(csv)) out.push_back(static_cast<int>(v));
  return out;
}

std::vector<std::string> parse_string_list(const std::string& csv) {
  std::vector<std::string> out;
  std::stringstream stream(csv);
  std::string item;
  while (std::getline(stream, item, ',')) {
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

// ---- ri ----

int run_ri_score(const std::string& card_path, const std::string& output, bool strict_gate) {
  const rgauge::Scorecard card = rgauge::Scorecard::from_json(read_json_file(card_path));
  const rgauge::RegimeTier tier = rgauge::classify(card, strict_gate);
  const rgauge::Recommendation rec = rgauge::recommend(tier);
  json payload = {{"domain", card.domain_name},
                  {"total", tier.total},
                  {"tier", rgauge::to_string(tier.tier)},
                  {"gated", tier.gated},
                  {"recommendation", rgauge::to_string(rec)},
                  {"recommendation_text", rgauge::recommendation_text(rec)}};
  write_output(output, render_json(with_meta(std::move(payload),
                                             {{"card", card_path}, {"strict_gate", strict_gate}})));
  return kExitOk;
}

// ---- deff ----

int run_deff(const std::string& data_path, const std::string& methods_csv, double prior,
             double variance_fraction, const std::string& domain, const std::string& output) {
  const auto [matrix, names] = rgauge::load_matrix_csv(data_path);
  const std::vector<std::string> methods = parse_string_list(methods_csv);

  std::vector<rgauge::DeffEstimate> estimates;
  json per_method = json::array();
  for (const auto& method : methods) {
    rgauge::DeffEstimate est;
    if (method == "pca") {
      est = rgauge::pca_threshold(rgauge::Spectrum::from_data(matrix), variance_fraction);
    } else if (method == "pr") {
      est = rgauge::participation_ratio(rgauge::Spectrum::from_data(matrix));
    } else if (method == "twonn") {
      est = rgauge::twonn(matrix);
    } else {
      throw std::runtime_error("unknown deff method '" + method + "' (expected pca, pr, twonn)");
    }
    per_method.push_back(
        {{"method", rgauge::to_string(est.method)}, {"value", est.value}, {"detail", est.detail}});
    estimates.push_back(std::move(est));
  }
  if (prior > 0.0) {
    rgauge::DeffEstimate est;
    est.method = rgauge::DeffMethod::DomainPrior;
    est.value = prior;
    est.detail = {{"source", "--prior"}};
    per_method.push_back(
        {{"method", rgauge::to_string(est.method)}, {"value", est.value}, {"detail", est.detail}});
    estimates.push_back(std::move(est));
  }
  const rgauge::DeffEstimate result = rgauge::consensus(estimates);
  json payload = {{"domain", domain},
                  {"estimates", per_method},
                  {"consensus", {{"value", result.value}, {"detail", result.detail}}}};
  write_output(output,
               render_json(with_meta(std::move(payload), {{"data", data_path},
                                                          {"methods", methods_csv},
                                                          {"prior", prior},
                                                          {"variance_fraction", variance_fraction}})));
  return kExitOk;
}

// ---- gap ----

int run_gap(double rho, long long n, double d_eff, std::optional<double> tau,
            std::optional<double> accrual, double zone_half_width, const std::string& domain,
            const std::string& output) {
  rgauge::ViabilityInput input;
  input.rho = rho;
  input.n = n;
  input.d_eff = d_eff;
  input.tau_half = tau;
  input.accrual = accrual;
  const rgauge::GapResult result = rgauge::viability_gap(input, {}, zone_half_width);
  json payload = {{"domain", domain},
                  {"V", result.gap},
                  {"zone", rgauge::to_string(result.zone)},
                  {"boundary", result.boundary_value},
                  {"log_richness", result.log_richness},
                  {"caveat", rgauge::kBoundaryCaveat}};
  if (result.n_viable) {
    payload["n_viable"] = *result.n_viable;
    payload["forbidden_zone_advisory"] = result.forbidden_zone_advisory;
  }
  json config = {{"rho", rho}, {"n", n}, {"deff", d_eff}, {"zone_half_width", zone_half_width}};
  if (tau) config["tau"] = *tau;
  if (accrual) config["accrual"] = *accrual;
  write_output(output, render_json(with_meta(std::move(payload), std::move(config))));
  return kExitOk;
}

// domains CSV: name,rho,n,deff
int run_gap_phase_csv(const std::string& domains_path, double zone_half_width,
                      const std::string& output) {
  std::ifstream file(domains_path);
  if (!file) throw std::runtime_error("cannot open '" + domains_path + "'");
  std::string line;
  if (!std::getline(file, line)) throw std::runtime_error("'" + domains_path + "' is empty");
  std::vector<rgauge::PhaseDomain> domains;
  while (std::getline(file, line)) {
    if (line.empty()) continue;
    std::stringstream stream(line);
    rgauge::PhaseDomain dom;
    std::string cell;
    std::getline(stream, dom.name, ',');
    std::getline(stream, cell, ',');
    dom.rho = std::stod(cell);
    std::getline(stream, cell, ',');
    dom.n = std::stoll(cell);
    std::getline(stream, cell, ',');
    dom.d_eff = std::stod(cell);
    domains.push_back(std::move(dom));
  }
  const rgauge::PhaseTable table = rgauge::phase_points(domains, {}, zone_half_width);
  std::string out = csv_preamble({{"domains", domains_path},
                                  {"zone_half_width", zone_half_width},
                                  {"caveat", rgauge::kBoundaryCaveat}});
  out += "name,rho,log_richness,boundary,V,zone\n";
  for (const auto& point : table.points) {
    out += point.name + "," + fmt(point.rho) + "," + fmt(point.log_richness) + "," +
           fmt(point.boundary_value) + "," + fmt(point.gap) + "," + rgauge::to_string(point.zone) +
           "\n";
  }
  for (const auto& err : table.row_errors) std::cerr << "warning: " << err << "\n";
  write_output(output, out);
  return kExitOk;
}

// ---- train ----

int run_train(const std::string& data_path, const std::string& label_column,
              const std::string& env_column, const std::string& rung_name,
              const std::string& features_csv, double l2, double lr, int epochs, int batch,
              int estimators, int depth, std::uint64_t seed, const std::string& model_out,
              const std::string& output) {
  const rgauge::LoadReport report = rgauge::load_csv(data_path, label_column, env_column);
  rgauge::ModelSpec spec = rgauge::ModelSpec::defaults(rgauge::rung_from_string(rung_name));
  spec.feature_subset = parse_string_list(features_csv);
  spec.hp.l2 = l2;
  spec.hp.learning_rate = lr;
  spec.hp.epochs = epochs;
  spec.hp.batch_size = batch;
  spec.hp.estimators = estimators;
  spec.hp.max_depth = depth;
  spec.hp.seed = seed;
  const rgauge::FittedModel model = rgauge::train(report.data, rgauge::Env::A, spec);
  rgauge::save_model(model, model_out);

  json payload = {{"model_path", model_out},
                  {"rung", rgauge::to_string(spec.rung)},
                  {"rows_used",
                   static_cast<long long>(report.data.env_rows(rgauge::Env::A).size())},
                  {"dropped_rows", report.dropped_rows},
                  {"seed", seed}};
  write_output(output, render_json(with_meta(std::move(payload), spec.to_json())));
  return kExitOk;
}

// ---- cst ----

int run_cst(const std::string& data_path, const std::string& label_column,
            const std::string& env_column, const std::string& baseline_features_csv,
            const std::string& challenger_name, double delta, double l2, double lr, int epochs,
            int batch, int bootstrap, std::uint64_t seed, const std::string& output) {
  const rgauge::LoadReport loaded = rgauge::load_csv(data_path, label_column, env_column);
  const rgauge::TabularDataset& data = loaded.data;

  rgauge::ModelSpec baseline_spec = rgauge::ModelSpec::defaults(rgauge::Rung::ExpertLR);
  baseline_spec.feature_subset = parse_string_list(baseline_features_csv);
  baseline_spec.hp.l2 = l2;
  baseline_spec.hp.seed = seed;

  rgauge::ModelSpec challenger_spec =
      rgauge::ModelSpec::defaults(rgauge::rung_from_string(challenger_name));
  challenger_spec.hp.l2 = l2;
  challenger_spec.hp.learning_rate = lr;
  challenger_spec.hp.epochs = epochs;
  challenger_spec.hp.batch_size = batch;
  challenger_spec.hp.seed = seed;

  const rgauge::FittedModel baseline = rgauge::train(data, rgauge::Env::A, baseline_spec);
  const rgauge::FittedModel challenger = rgauge::train(data, rgauge::Env::A, challenger_spec);
  const rgauge::ShiftReport baseline_report = rgauge::shift_report(baseline, data, bootstrap, seed);
  const rgauge::ShiftReport challenger_report =
      rgauge::shift_report(challenger, data, bootstrap, seed);
  const rgauge::CstDecision decision = rgauge::cst(baseline_report, challenger_report, delta);

  const auto report_json = [](const rgauge::ShiftReport& rep) {
    json envs = json::object();
    for (const auto& [env, value] : rep.per_env_auroc) envs[rgauge::to_string(env)] = value;
    json out = {{"per_env_auroc", envs},
                {"robust_auroc", rep.robust_auroc},
                {"rung", rgauge::to_string(rep.model.rung)}};
    if (rep.delta_valid) out["delta"] = rep.delta;
    if (!rep.bootstrap_ci.empty()) {
      json cis = json::object();
      for (const auto& [env, ci] : rep.bootstrap_ci) {
        cis[rgauge::to_string(env)] = {{"low", ci.low}, {"high", ci.high}};
      }
      out["auroc_ci"] = cis;
    }
    if (!rep.warnings.empty()) out["warnings"] = rep.warnings;
    return out;
  };

  json payload = {{"decision", rgauge::to_string(decision.decision)},
                  {"margin", decision.margin},
                  {"robust_margin", decision.robust_margin},
                  {"delta_threshold", delta},
                  {"delta_threshold_note",
                   "default 0.05 AUROC transplanted from the clinically-significant margin; configurable"},
                  {"baseline", report_json(baseline_report)},
                  {"challenger", report_json(challenger_report)},
                  {"slope_advantage",
                   rgauge::degradation_slope_advantage(baseline_report, challenger_report)}};
  write_output(output, render_json(with_meta(std::move(payload),
                                             {{"data", data_path},
                                              {"baseline_features", baseline_features_csv},
                                              {"challenger", challenger_name},
                                              {"delta", delta},
                                              {"seed", seed},
                                              {"bootstrap", bootstrap}})));
  return decision.decision == rgauge::CstOutcome::AdoptComplexity ? kExitAdoptComplexity : kExitOk;
}

// ---- simulate ----

int run_simulate_fig2(double rho, const std::string& capacities_csv, int reps, int n_per_env,
                      std::uint64_t seed, const std::string& coupling, const std::string& output) {
  rgauge::SimConfig config;
  config.rho = rho;
  config.repetitions = reps;
  config.n_per_env = n_per_env;
  config.seed = seed;
  if (coupling == "label") {
    config.coupling = rgauge::SpuriousCoupling::Label;
  } else if (coupling != "score") {
    throw std::runtime_error("coupling must be 'score' or 'label'");
  }
  const std::vector<int> capacities = parse_int_list(capacities_csv);
  const auto rows = rgauge::simulate_fig2(config, capacities);
  std::string out = csv_preamble({{"rho", rho},
                                  {"capacities", capacities_csv},
                                  {"repetitions", reps},
                                  {"n_per_env", n_per_env},
                                  {"seed", seed},
                                  {"coupling", coupling},
                                  {"logistic_l2", rgauge::kFig2LogisticL2}});
  out += "capacity,repetition,id_accuracy,ood_accuracy,robust_accuracy\n";
  for (const auto& row : rows) {
    out += std::to_string(row.capacity) + "," + std::to_string(row.repetition) + "," +
           fmt(row.id_accuracy) + "," + fmt(row.ood_accuracy) + "," + fmt(row.robust_accuracy) +
           "\n";
  }
  write_output(output, out);
  return kExitOk;
}

// ---- synth ----

int run_synth_stats(const std::string& table_path, const std::string& output) {
  std::ifstream file(table_path);
  if (!file) throw std::runtime_error("cannot open '" + table_path + "'");
  std::string line;
  if (!std::getline(file, line)) throw std::runtime_error("'" + table_path + "' is empty");
  std::vector<rgauge::ConcordanceRow> rows;
  while (std::getline(file, line)) {
    if (line.empty()) continue;
    std::stringstream stream(line);
    rgauge::ConcordanceRow row;
    std::string cell;
    std::getline(stream, row.domain, ',');
    std::getline(stream, cell, ',');
    if (cell == "Shifting") {
      row.ri_score = 3.0;
    } else if (cell == "Borderline") {
      row.ri_score = 2.0;
    } else if (cell == "Stable") {
      row.ri_score = 0.0;
    } else {
      row.ri_score = std::stod(cell);
    }
    std::getline(stream, cell, ',');
    row.winner = rgauge::winner_from_string(cell);
    rows.push_back(std::move(row));
  }
  const rgauge::ConcordanceResult result = rgauge::concordance_table(rows);
  json payload = {{"successes", result.successes},
                  {"trials", result.trials},
                  {"proportion", result.proportion},
                  {"wilson_low", result.wilson_low},
                  {"wilson_high", result.wilson_high},
                  {"p_two_sided", result.p_two_sided},
                  {"cohens_h", result.cohens_h},
                  {"shifting", {{"successes", result.breakdown.shifting_successes},
                                {"trials", result.breakdown.shifting_trials}}},
                  {"stable", {{"successes", result.breakdown.stable_successes},
                              {"trials", result.breakdown.stable_trials}}},
                  {"borderline_excluded", result.breakdown.borderline_excluded}};
  if (!result.notes.empty()) payload["notes"] = result.notes;
  write_output(output, render_json(with_meta(std::move(payload), {{"table", table_path}})));
  return kExitOk;
}

int run_synth_fixture(const std::string& output) {
  std::string out = "domain,ri,winner\n";
  for (const auto& row : rgauge::synthesis_fixture()) {
    out += row.domain + "," + fmt(row.ri_score) + "," + rgauge::to_string(row.winner) + "\n";
  }
  write_output(output, out);
  return kExitOk;
}

// ---- rr ----

int run_rr_demo(const std::string& rhos_csv, double lambda, int seeds, int steps, int n_per_env,
                int spurious, std::uint64_t seed, const std::string& output) {
  rgauge::AdaptivityConfig config;
  config.lambda = lambda;
  config.seeds = seeds;
  config.steps = steps;
  config.sim.n_per_env = n_per_env;
  config.sim.max_spurious = spurious;
  config.sim.seed = seed;
  const auto rows = rgauge::regime_adaptivity_demo(parse_double_list(rhos_csv), config);
  std::string out = csv_preamble({{"rhos", rhos_csv},
                                  {"lambda", lambda},
                                  {"seeds", seeds},
                                  {"steps", steps},
                                  {"n_per_env", n_per_env},
                                  {"max_spurious", spurious},
                                  {"seed", seed}});
  out += "rho,active_directions_mean,active_directions_sd\n";
  for (const auto& row : rows) {
    out += fmt(row.rho) + "," + fmt(row.active_mean) + "," + fmt(row.active_sd) + "\n";
    for (const auto& err : row.errors) std::cerr << "warning: rho " << row.rho << ": " << err << "\n";
  }
  write_output(output, out);
  return kExitOk;
}

// ---- report ----

int run_report(const std::string& ri_path, const std::string& deff_path,
               const std::string& gap_path, const std::string& cst_path,
               const std::string& output) {
  const json ri = read_json_file(ri_path);
  std::optional<json> deff, gap, cst_doc;
  if (!deff_path.empty()) deff = read_json_file(deff_path);
  if (!gap_path.empty()) gap = read_json_file(gap_path);
  if (!cst_path.empty()) cst_doc = read_json_file(cst_path);
  json bundle = rgauge::report_bundle(ri, deff, gap, cst_doc);
  write_output(output, render_json(with_meta(std::move(bundle), {{"ri", ri_path},
                                                                 {"deff", deff_path},
                                                                 {"gap", gap_path},
                                                                 {"cst", cst_path}})));
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"regime-gauge: robustness diagnostics for model-capacity selection"};
  app.require_subcommand(1);
  app.fallthrough();  // let --seed/--output appear after subcommand names

  std::uint64_t seed = 42;
  std::string output = "-";
  app.add_option("--seed", seed, "global random seed (echoed in every stochastic output)");
  app.add_option("--output", output, "output path, '-' for stdout");

  // ri
  auto* ri = app.add_subcommand("ri", "regime-index scorecard operations");
  auto* ri_score = ri->add_subcommand("score", "score a scorecard JSON file");
  std::string card_path;
  bool no_strict_gate = false;
  ri_score->add_option("--card", card_path, "scorecard JSON")->required();
  ri_score->add_flag("--no-strict-gate", no_strict_gate,
                     "gate only a full temporal-instability score of 1 (default also gates 0.5)");

  // deff
  auto* deff = app.add_subcommand("deff", "effective-dimensionality estimation");
  auto* deff_est = deff->add_subcommand("estimate", "estimate D_eff from a numeric CSV");
  std::string deff_data, deff_methods = "pca,pr,twonn", deff_domain;
  double deff_prior = 0.0, deff_fraction = 0.95;
  deff_est->add_option("--data", deff_data, "numeric matrix CSV")->required();
  deff_est->add_option("--methods", deff_methods, "comma list of pca,pr,twonn");
  deff_est->add_option("--prior", deff_prior, "domain-prior upper bound (0 = none)");
  deff_est->add_option("--variance-fraction", deff_fraction, "PCA variance fraction");
  deff_est->add_option("--domain", deff_domain, "domain name for the report bundle");

  // gap
  auto* gap = app.add_subcommand("gap", "viability gap");
  double gap_rho = 0.0, gap_deff = 1.0, gap_zone = rgauge::kDefaultZoneHalfWidth;
  long long gap_n = 1;
  std::string gap_domain;
  std::optional<double> gap_tau, gap_accrual;
  double gap_tau_val = 0.0, gap_accrual_val = 0.0;
  auto* gap_tau_opt = gap->add_option("--tau", gap_tau_val, "data half-life (years)");
  auto* gap_accrual_opt = gap->add_option("--accrual", gap_accrual_val, "accrual rate (samples/year)");
  // Required for the plain gap computation, but not when the phase
  // subcommand runs; enforced after parsing.
  auto* gap_rho_opt = gap->add_option("--rho", gap_rho, "signal stability in [0,1]");
  auto* gap_n_opt = gap->add_option("--n", gap_n, "sample count");
  auto* gap_deff_opt = gap->add_option("--deff", gap_deff, "effective dimension");
  gap->add_option("--zone-half-width", gap_zone, "transition-zone half width");
  gap->add_option("--domain", gap_domain, "domain name for the report bundle");
  auto* gap_phase = gap->add_subcommand("phase", "phase-diagram points from a domains CSV");
  std::string phase_domains;
  gap_phase->add_option("--domains", phase_domains, "CSV with name,rho,n,deff")->required();
  gap->require_subcommand(0, 1);

  // train
  auto* train_cmd = app.add_subcommand("train", "train one capacity-ladder rung on env A");
  std::string train_data, train_label = "label", train_env = "env", train_rung = "expert_lr";
  std::string train_features, train_out = "model.json";
  double train_l2 = 1e-4, train_lr = 0.05;
  int train_epochs = 100, train_batch = 256, train_estimators = 200, train_depth = 3;
  train_cmd->add_option("--data", train_data, "dataset CSV")->required();
  train_cmd->add_option("--label-column", train_label, "label column name");
  train_cmd->add_option("--env-column", train_env, "environment column name");
  train_cmd->add_option("--rung", train_rung,
                        "expert_lr, extended_lr, gbm, shallow_mlp or deep_mlp");
  train_cmd->add_option("--features", train_features, "comma list of feature columns (LR rungs)");
  train_cmd->add_option("--l2", train_l2, "L2 strength");
  train_cmd->add_option("--lr", train_lr, "MLP learning rate");
  train_cmd->add_option("--epochs", train_epochs, "MLP epochs");
  train_cmd->add_option("--batch", train_batch, "MLP batch size");
  train_cmd->add_option("--estimators", train_estimators, "GBM boosting rounds");
  train_cmd->add_option("--depth", train_depth, "GBM max depth");
  train_cmd->add_option("--out", train_out, "model JSON path");

  // cst
  auto* cst_cmd = app.add_subcommand("cst", "compression superiority test");
  auto* cst_run = cst_cmd->add_subcommand("run", "train baseline and challenger, decide");
  std::string cst_data, cst_label = "label", cst_env = "env", cst_features, cst_challenger = "deep_mlp";
  double cst_delta = rgauge::kDefaultCstDelta, cst_l2 = 1e-4, cst_lr = 0.05;
  int cst_epochs = 100, cst_batch = 256, cst_bootstrap = 0;
  cst_run->add_option("--data", cst_data, "dataset CSV")->required();
  cst_run->add_option("--label-column", cst_label, "label column name");
  cst_run->add_option("--env-column", cst_env, "environment column name");
  cst_run->add_option("--baseline-features", cst_features, "expert feature list")->required();
  cst_run->add_option("--challenger", cst_challenger, "challenger rung");
  cst_run->add_option("--delta", cst_delta, "adoption threshold on env-C AUROC margin");
  cst_run->add_option("--l2", cst_l2, "L2 strength for both models");
  cst_run->add_option("--lr", cst_lr, "challenger MLP learning rate");
  cst_run->add_option("--epochs", cst_epochs, "challenger MLP epochs");
  cst_run->add_option("--batch", cst_batch, "challenger MLP batch size");
  cst_run->add_option("--bootstrap", cst_bootstrap, "bootstrap resamples for AUROC CIs (0 = off)");

  // simulate
  auto* sim = app.add_subcommand("simulate", "synthetic shift simulations");
  auto* fig2 = sim->add_subcommand("fig2", "robust accuracy vs capacity sweep");
  double fig2_rho = 0.25;
  std::string fig2_caps = "0,1,2,4,8,16,32,64", fig2_coupling = "score";
  int fig2_reps = 20, fig2_n = 2000;
  fig2->add_option("--rho", fig2_rho, "signal stability");
  fig2->add_option("--capacities", fig2_caps, "comma list of spurious-feature counts");
  fig2->add_option("--reps", fig2_reps, "repetitions per capacity");
  fig2->add_option("--n-per-env", fig2_n, "samples per environment");
  fig2->add_option("--coupling", fig2_coupling, "spurious coupling: score or label");

  // synth
  auto* synth = app.add_subcommand("synth", "meta-synthesis statistics");
  auto* synth_stats = synth->add_subcommand("stats", "concordance statistics from a table CSV");
  std::string synth_table;
  synth_stats->add_option("--table", synth_table, "CSV with domain,ri(or tier),winner")->required();
  auto* synth_fixture = synth->add_subcommand("fixture", "print the embedded 15-domain table");

  // rr
  auto* rr = app.add_subcommand("rr", "rate-reduction objective");
  auto* rr_demo = rr->add_subcommand("demo", "active-direction counts over a rho grid");
  std::string rr_rhos = "0.0,0.25,0.5,0.75,1.0";
  double rr_lambda = 2e-4;
  int rr_seeds = 20, rr_steps = 150, rr_n = 250, rr_spurious = 16;
  rr_demo->add_option("--rhos", rr_rhos, "comma list of stability values");
  rr_demo->add_option("--lambda", rr_lambda, "sparsity weight");
  rr_demo->add_option("--seeds", rr_seeds, "Monte-Carlo seeds per rho");
  rr_demo->add_option("--steps", rr_steps, "ascent steps");
  rr_demo->add_option("--n-per-env", rr_n, "samples per environment");
  rr_demo->add_option("--spurious", rr_spurious, "spurious feature count");

  // report
  auto* report_cmd = app.add_subcommand("report", "merge subcommand outputs into one bundle");
  std::string rep_ri, rep_deff, rep_gap, rep_cst;
  report_cmd->add_option("--ri", rep_ri, "ri score output JSON")->required();
  report_cmd->add_option("--deff", rep_deff, "deff estimate output JSON");
  report_cmd->add_option("--gap", rep_gap, "gap output JSON");
  report_cmd->add_option("--cst", rep_cst, "cst run output JSON");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& err) {
    const int code = app.exit(err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (*ri_score) return run_ri_score(card_path, output, !no_strict_gate);
    if (*deff_est) {
      return run_deff(deff_data, deff_methods, deff_prior, deff_fraction, deff_domain, output);
    }
    if (*gap_phase) return run_gap_phase_csv(phase_domains, gap_zone, output);
    if (*gap) {
      if (gap_rho_opt->count() == 0 || gap_n_opt->count() == 0 || gap_deff_opt->count() == 0) {
        std::cerr << "gap requires --rho, --n and --deff (or the 'phase' subcommand)\n";
        return kExitUsage;
      }
      if (gap_tau_opt->count() > 0) gap_tau = gap_tau_val;
      if (gap_accrual_opt->count() > 0) gap_accrual = gap_accrual_val;
      return run_gap(gap_rho, gap_n, gap_deff, gap_tau, gap_accrual, gap_zone, gap_domain, output);
    }
    if (*train_cmd) {
      return run_train(train_data, train_label, train_env, train_rung, train_features, train_l2,
                       train_lr, train_epochs, train_batch, train_estimators, train_depth, seed,
                       train_out, output);
    }
    if (*cst_run) {
      return run_cst(cst_data, cst_label, cst_env, cst_features, cst_challenger, cst_delta, cst_l2,
                     cst_lr, cst_epochs, cst_batch, cst_bootstrap, seed, output);
    }
    if (*fig2) {
      return run_simulate_fig2(fig2_rho, fig2_caps, fig2_reps, fig2_n, seed, fig2_coupling, output);
    }
    if (*synth_stats) return run_synth_stats(synth_table, output);
    if (*synth_fixture) return run_synth_fixture(output);
    if (*rr_demo) {
      return run_rr_demo(rr_rhos, rr_lambda, rr_seeds, rr_steps, rr_n, rr_spurious, seed, output);
    }
    if (*report_cmd) return run_report(rep_ri, rep_deff, rep_gap, rep_cst, output);
  } catch (const std::exception& err) {
    std::cerr << "error: " << err.what() << "\n";
    return kExitDataError;
  }
  std::cerr << app.help();
  return kExitUsage;
}
