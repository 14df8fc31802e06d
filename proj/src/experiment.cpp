#include "tamlearn/experiment.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <iomanip>
#include <ostream>
#include <sstream>

#include "tamlearn/error.hpp"
#include "tamlearn/model_io.hpp"

namespace tamlearn {

using nlohmann::json;

LearnerSpec ExperimentConfig::learner() const {
  LearnerSpec s;
  s.method = method;
  s.k = k;
  s.svm.C = C;
  s.svm.degree = d;
  s.svm.bias = svm_bias;
  s.maxent.tol = maxent_tol;
  s.maxent.max_iters = maxent_max_iters;
  s.maxent.prior_variance = maxent_prior_variance;
  s.features.max_suffix = max_suffix;
  s.features.strip_terminal_punct = strip_terminal_punct;
  return s;
}

FeatureSet ExperimentConfig::mode() const { return feature_set_from_int(feature_set); }

json ExperimentConfig::to_json() const {
  json j = {{"command", command},
            {"method", std::string(to_string(method))},
            {"feature_set", feature_set},
            {"k", k},
            {"d", d},
            {"C", C},
            {"svm_bias", std::string(to_string(svm_bias))},
            {"folds", folds},
            {"seed", seed},
            {"maxent_tol", maxent_tol},
            {"maxent_max_iters", maxent_max_iters},
            {"maxent_prior_variance", maxent_prior_variance ? json(*maxent_prior_variance) : json(nullptr)},
            {"max_suffix", max_suffix},
            {"strip_terminal_punct", strip_terminal_punct},
            {"closed", closed},
            {"all", all},
            {"threads", threads},
            {"input", input},
            {"train_input", train_input},
            {"model", model}};
  if (command == "analyze") {
    j["compare_feature_set"] = compare_feature_set;
    j["effective_feature_set"] = effective_feature_set;
    j["level"] = level;
    j["n_plus"] = n_plus ? json(*n_plus) : json(nullptr);
    j["n_minus"] = n_minus ? json(*n_minus) : json(nullptr);
  }
  return j;
}

void validate(const ExperimentConfig& c) {
  static const char* kCommands[] = {"train", "eval", "cv", "cross-domain", "analyze", "distribution"};
  if (std::find(std::begin(kCommands), std::end(kCommands), c.command) == std::end(kCommands)) {
    throw ConfigError("unknown command '" + c.command + "'");
  }
  const auto mode = c.mode();
  if (!c.all && c.command != "distribution" && !(c.command == "analyze" && c.n_plus)) validate(c.learner(), mode);
  if (c.method == Method::Svm && c.d != 1 && c.d != 2) throw ConfigError("svm: --d must be 1 or 2");
  if ((c.command == "cv" || c.command == "analyze" || c.command == "cross-domain") && c.folds < 2) {
    throw ConfigError("--folds must be at least 2");
  }
  if (c.command == "analyze") {
    feature_set_from_int(c.compare_feature_set);
    feature_set_from_int(c.effective_feature_set);
    if (c.n_plus.has_value() != c.n_minus.has_value()) throw ConfigError("--n-plus and --n-minus go together");
    if (!c.n_plus && c.method == Method::Knn && c.compare_feature_set != 2) {
      throw ConfigError("knn is only defined for feature set 2");
    }
    if (!(c.level > 0.0 && c.level < 1.0)) throw ConfigError("--level must be in (0, 1)");
  }
  const bool needs_input = !(c.command == "analyze" && c.n_plus);
  if (needs_input && c.input.empty()) throw ConfigError("--input is required");
  if (c.command == "cross-domain" && c.train_input.empty()) throw ConfigError("--train-input is required");
  if (c.command == "train" && c.model.empty()) throw ConfigError("--model is required for train");
  if (c.command == "eval" && c.model.empty() && c.method != Method::Baseline) {
    throw ConfigError("eval needs --model (or --method baseline)");
  }
}

std::string report_jsonl(const PrecisionReport& report, const json& config) {
  std::string out;
  for (const auto& f : report.folds) {
    json rec = {{"type", "fold"}, {"fold", f.fold}, {"correct", f.correct}, {"total", f.total}};
    out += rec.dump();
    out += '\n';
  }
  json preds = json::array();
  for (const auto& p : report.predictions) preds.push_back({p.index, p.gold, p.predicted});
  json summary = {{"type", "summary"},
                  {"method", report.method},
                  {"feature_set", static_cast<int>(report.mode)},
                  {"closed", report.closed},
                  {"n_folds", report.n_folds},
                  {"seed", report.seed},
                  {"correct", report.correct()},
                  {"total", report.total()},
                  {"precision", report.precision()},
                  {"predictions", preds},
                  {"config", config}};
  out += summary.dump();
  out += '\n';
  return out;
}

namespace {

std::string percent(double p) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f%%", 100.0 * p);
  return buf;
}

std::string pad(std::string s, std::size_t width) {
  // Width counts characters, not bytes.
  std::size_t chars = 0;
  for (char c : s) chars += (static_cast<unsigned char>(c) & 0xC0) != 0x80;
  if (chars < width) s.append(width - chars, ' ');
  return s;
}

}  // namespace

std::string precision_table(const std::vector<GridCell>& cells, std::optional<double> baseline) {
  std::vector<std::string> rows;
  for (const auto& c : cells) {
    if (std::find(rows.begin(), rows.end(), c.row) == rows.end()) rows.push_back(c.row);
  }
  constexpr std::size_t kRow = 20, kCol = 22;
  std::ostringstream os;
  std::string header = pad("Method", kRow);
  for (int fs = 1; fs <= 3; ++fs) header += pad("Feature-set " + std::to_string(fs), kCol);
  while (header.back() == ' ') header.pop_back();
  os << header << '\n';
  for (const auto& row : rows) {
    std::string line = pad(row, kRow);
    for (int fs = 1; fs <= 3; ++fs) {
      const GridCell* cell = nullptr;
      for (const auto& c : cells) {
        if (c.row == row && static_cast<int>(c.mode) == fs) cell = &c;
      }
      std::string text;
      if (cell == nullptr || (!cell->open && !cell->closed)) {
        text = "---";
      } else {
        text = cell->open ? percent(cell->open->precision()) : "---";
        if (cell->closed) text += " (" + percent(cell->closed->precision()) + ")";
      }
      line += pad(text, kCol);
    }
    while (!line.empty() && line.back() == ' ') line.pop_back();
    os << line << '\n';
  }
  if (baseline) os << "baseline = " << percent(*baseline) << '\n';
  return os.str();
}

std::vector<LearnerSpec> grid_rows(const ExperimentConfig& config) {
  std::vector<LearnerSpec> rows;
  auto base = config.learner();
  for (std::size_t k : {1, 3, 5, 7, 9}) {
    auto s = base;
    s.method = Method::Knn;
    s.k = k;
    rows.push_back(s);
  }
  for (auto m : {Method::DecisionList, Method::MaxEnt}) {
    auto s = base;
    s.method = m;
    rows.push_back(s);
  }
  for (int d : {1, 2}) {
    auto s = base;
    s.method = Method::Svm;
    s.svm.degree = d;
    rows.push_back(s);
  }
  return rows;
}

namespace {

class Output {
 public:
  Output(const std::string& path, std::ostream& fallback) {
    if (!path.empty()) {
      file_.open(path, std::ios::binary);
      if (!file_) throw IoError("cannot write report: " + path);
    }
    os_ = path.empty() ? &fallback : &file_;
  }
  std::ostream& stream() { return *os_; }

 private:
  std::ofstream file_;
  std::ostream* os_;
};

void run_train(const ExperimentConfig& c, std::ostream& out, std::ostream& err) {
  const auto data = read_corpus(c.input);
  const auto model = train(c.learner(), data, c.mode(), {}, c.threads);
  if (const auto* m = std::get_if<MaxEntModel>(&model.model)) {
    for (const auto& w : m->info().warnings) err << "warning: " << w << '\n';
  }
  save_model(model, c.model);
  json rec = {{"type", "train"},
              {"method", c.learner().row_name()},
              {"feature_set", c.feature_set},
              {"examples", data.size()},
              {"labels", data.label_inventory().size()},
              {"model", c.model},
              {"config", c.to_json()}};
  Output o(c.output, out);
  o.stream() << rec.dump() << '\n';
}

void emit(const ExperimentConfig& c, const PrecisionReport& r, std::ostream& os) {
  if (c.format == ReportFormat::Table) {
    GridCell cell{r.method, r.mode, std::nullopt, std::nullopt};
    (r.closed ? cell.closed : cell.open) = r;
    os << precision_table({cell}, std::nullopt);
  } else {
    os << report_jsonl(r, c.to_json());
  }
}

void run_eval(const ExperimentConfig& c, std::ostream& out) {
  const auto data = read_corpus(c.input);
  TrainedModel model;
  if (c.model.empty()) {
    model = TrainedModel{c.learner(), c.mode(), BaselineModel{}};
  } else {
    model = load_model(c.model);
  }
  Output o(c.output, out);
  emit(c, evaluate(model, data), o.stream());
}

void run_cv(const ExperimentConfig& c, std::ostream& out) {
  const auto data = read_corpus(c.input);
  const auto plan = split_folds(data, c.folds, c.seed);
  Output o(c.output, out);

  if (!c.all) {
    const auto spec = c.learner();
    auto open = cross_validate(spec, data, plan, c.mode(), c.threads);
    std::optional<PrecisionReport> closed;
    if (c.closed) closed = closed_test(spec, data, c.mode(), c.threads);
    if (c.format == ReportFormat::Table) {
      o.stream() << precision_table({GridCell{open.method, open.mode, open, closed}}, std::nullopt);
    } else {
      o.stream() << report_jsonl(open, c.to_json());
      if (closed) o.stream() << report_jsonl(*closed, c.to_json());
    }
    return;
  }

  std::vector<GridCell> cells;
  for (const auto& spec : grid_rows(c)) {
    for (auto fs : {FeatureSet::Combined, FeatureSet::Suffix, FeatureSet::Token}) {
      GridCell cell{spec.row_name(), fs, std::nullopt, std::nullopt};
      if (spec.method == Method::Knn && fs != FeatureSet::Suffix) {
        cells.push_back(std::move(cell));
        continue;
      }
      cell.open = cross_validate(spec, data, plan, fs, c.threads);
      cell.closed = closed_test(spec, data, fs, c.threads);
      cells.push_back(std::move(cell));
    }
  }
  LearnerSpec base_spec = c.learner();
  base_spec.method = Method::Baseline;
  const auto baseline = evaluate(TrainedModel{base_spec, FeatureSet::Suffix, BaselineModel{}}, data);

  if (c.format == ReportFormat::Table) {
    o.stream() << precision_table(cells, baseline.precision());
    return;
  }
  for (const auto& cell : cells) {
    if (!cell.open) continue;
    json rec = {{"type", "cell"},
                {"method", cell.row},
                {"feature_set", static_cast<int>(cell.mode)},
                {"open_correct", cell.open->correct()},
                {"open_precision", cell.open->precision()},
                {"closed_correct", cell.closed->correct()},
                {"closed_precision", cell.closed->precision()},
                {"total", cell.open->total()}};
    o.stream() << rec.dump() << '\n';
  }
  json summary = {{"type", "summary"},
                  {"baseline_precision", baseline.precision()},
                  {"total", data.size()},
                  {"config", c.to_json()}};
  o.stream() << summary.dump() << '\n';
}

void run_cross_domain(const ExperimentConfig& c, std::ostream& out) {
  const auto train_data = read_corpus(c.train_input);
  const auto test_data = read_corpus(c.input);
  const auto r = cross_domain_eval(train_data, test_data, c.learner(), c.mode(), c.folds, c.seed, c.threads);
  Output o(c.output, out);
  emit(c, r, o.stream());
}

void run_analyze(const ExperimentConfig& c, std::ostream& out) {
  Output o(c.output, out);
  json sign;
  std::vector<EffectiveFeature> effective;
  SignTestResult st;
  if (c.n_plus) {
    st = sign_test(*c.n_plus, *c.n_minus, c.level);
  } else {
    const auto data = read_corpus(c.input);
    const auto plan = split_folds(data, c.folds, c.seed);
    const auto spec = c.learner();
    const auto a = cross_validate(spec, data, plan, c.mode(), c.threads);
    const auto b = cross_validate(spec, data, plan, feature_set_from_int(c.compare_feature_set), c.threads);
    const auto cmp = compare(a, b);
    if (cmp.a_only + cmp.b_only == 0) {
      st = SignTestResult{0, 0, 1.0, c.level, false, true};
    } else {
      st = sign_test(cmp.a_only, cmp.b_only, c.level);
    }
    std::vector<Example> flip;
    for (auto i : cmp.a_only_indices) flip.push_back(data[i]);
    effective = effective_features(flip, data.examples(), feature_set_from_int(c.effective_feature_set), c.level,
                                   spec.features);
  }
  if (c.format == ReportFormat::Table) {
    auto& os = o.stream();
    os << "sign test: n+ = " << st.n_plus << ", n- = " << st.n_minus << ", p = " << std::setprecision(6)
       << st.p_value << (st.exact ? " (exact)" : " (normal approximation)") << ", "
       << (st.significant ? "significant" : "not significant") << " at " << st.level << '\n';
    if (!c.n_plus) {
      os << pad("Frequency", 10) << "Feature\n";
      for (const auto& e : effective) os << pad(std::to_string(e.flip_count), 10) << e.feature.text << '\n';
    }
    return;
  }
  json rec = {{"type", "sign_test"},  {"n_plus", st.n_plus},           {"n_minus", st.n_minus},
              {"p_value", st.p_value}, {"exact", st.exact},             {"level", st.level},
              {"significant", st.significant}, {"config", c.to_json()}};
  o.stream() << rec.dump() << '\n';
  for (const auto& e : effective) {
    json f = {{"type", "effective_feature"},
              {"feature", e.feature.text},
              {"kind", e.feature.kind == FeatureKind::Suffix ? "suffix" : "token"},
              {"frequency", e.flip_count},
              {"all_frequency", e.all_count},
              {"p_value", e.p_value}};
    o.stream() << f.dump() << '\n';
  }
}

void run_distribution(const ExperimentConfig& c, std::ostream& out) {
  const auto data = read_corpus(c.input);
  Output o(c.output, out);
  const auto dist = category_distribution(data);
  if (c.format == ReportFormat::Table) {
    o.stream() << pad("Category", 16) << "Rate\n";
    for (const auto& [label, rate] : dist) {
      char buf[16];
      std::snprintf(buf, sizeof buf, "%.2f", rate);
      o.stream() << pad(label, 16) << buf << '\n';
    }
    return;
  }
  for (const auto& [label, rate] : dist) {
    json rec = {{"type", "category"}, {"label", label}, {"count", data.label_inventory().count(label)}, {"rate", rate}};
    o.stream() << rec.dump() << '\n';
  }
  json summary = {{"type", "summary"}, {"total", data.size()}, {"config", c.to_json()}};
  o.stream() << summary.dump() << '\n';
}

}  // namespace

int run(const ExperimentConfig& config, std::ostream& out, std::ostream& err) {
  try {
    validate(config);
    if (config.command == "train") {
      run_train(config, out, err);
    } else if (config.command == "eval") {
      run_eval(config, out);
    } else if (config.command == "cv") {
      run_cv(config, out);
    } else if (config.command == "cross-domain") {
      run_cross_domain(config, out);
    } else if (config.command == "analyze") {
      run_analyze(config, out);
    } else {
      run_distribution(config, out);
    }
    return static_cast<int>(ExitCode::Ok);
  } catch (const ConfigError& e) {
    err << "usage error: " << e.what() << '\n';
    return static_cast<int>(ExitCode::Usage);
  } catch (const ArgumentError& e) {
    err << "usage error: " << e.what() << '\n';
    return static_cast<int>(ExitCode::Usage);
  } catch (const ParseError& e) {
    err << "corpus error: " << e.what() << '\n';
    return static_cast<int>(ExitCode::Data);
  } catch (const EncodingError& e) {
    err << "encoding error: " << e.what() << '\n';
    return static_cast<int>(ExitCode::Data);
  } catch (const IoError& e) {
    err << "I/O error: " << e.what() << '\n';
    return static_cast<int>(ExitCode::Data);
  } catch (const DescriptorError& e) {
    err << "descriptor error: " << e.what() << '\n';
    return static_cast<int>(ExitCode::Data);
  } catch (const Error& e) {
    err << "training error: " << e.what() << '\n';
    return static_cast<int>(ExitCode::Training);
  }
}

}  // namespace tamlearn
