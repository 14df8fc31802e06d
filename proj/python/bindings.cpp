#include <pybind11/pybind11.h>
#include <pybind11/operators.h>
#include <pybind11/stl.h>

#include "tamlearn/corpus.hpp"
#include "tamlearn/error.hpp"
#include "tamlearn/eval.hpp"
#include "tamlearn/learner.hpp"
#include "tamlearn/model_io.hpp"
#include "tamlearn/synthetic.hpp"

namespace py = pybind11;
using namespace tamlearn;

namespace {

FeatureSet feature_set(int fs) {
  if (fs < 1 || fs > 3) throw ConfigError("feature set must be 1, 2 or 3");
  return static_cast<FeatureSet>(fs);
}

LearnerSpec make_spec(const std::string& method, int degree, double C, const std::string& bias, std::size_t k,
                      std::size_t max_suffix, bool strip_punct) {
  LearnerSpec s;
  s.method = method_from_string(method);
  s.svm.degree = degree;
  s.svm.C = C;
  s.svm.bias = bias_rule_from_string(bias);
  s.k = k;
  s.features.max_suffix = max_suffix;
  s.features.strip_terminal_punct = strip_punct;
  return s;
}

py::dict report_dict(const PrecisionReport& r) {
  py::list preds;
  for (const auto& p : r.predictions) preds.append(py::make_tuple(p.index, p.gold, p.predicted));
  py::dict d;
  d["method"] = r.method;
  d["feature_set"] = static_cast<int>(r.mode);
  d["correct"] = r.correct();
  d["total"] = r.total();
  d["precision"] = r.precision();
  d["predictions"] = preds;
  return d;
}

Example as_example(const py::object& x) {
  if (py::isinstance<py::str>(x)) return Example{"", x.cast<std::string>(), std::nullopt};
  return x.cast<Example>();
}

#define LEARNER_ARGS                                                                                         \
  py::arg("method") = "svm", py::arg("features") = 1, py::arg("degree") = 1, py::arg("C") = 1.0,             \
  py::arg("bias") = "extremes", py::arg("k") = 1, py::arg("max_suffix") = 10, py::arg("strip_punct") = false

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Tense, aspect and modality classifiers for Japanese sentences";

  auto base = py::register_exception<Error>(m, "Error", PyExc_RuntimeError);
  py::register_exception<ParseError>(m, "ParseError", base.ptr());
  py::register_exception<EncodingError>(m, "EncodingError", base.ptr());
  py::register_exception<DescriptorError>(m, "DescriptorError", base.ptr());
  py::register_exception<ArgumentError>(m, "ArgumentError", base.ptr());
  py::register_exception<ConfigError>(m, "ConfigError", base.ptr());
  py::register_exception<ModelError>(m, "ModelError", base.ptr());
  py::register_exception<IoError>(m, "IoError", base.ptr());
  py::register_exception<TrainingError>(m, "TrainingError", base.ptr());

  py::class_<Example>(m, "Example")
      .def(py::init<std::string, std::string, std::optional<std::vector<std::string>>>(), py::arg("label"),
           py::arg("sentence"), py::arg("tokens") = std::nullopt)
      .def_readwrite("label", &Example::label)
      .def_readwrite("sentence", &Example::sentence)
      .def_readwrite("tokens", &Example::tokens)
      .def(py::self == py::self)
      .def("__repr__", [](const Example& e) { return "Example(" + e.label + ", " + e.sentence + ")"; });

  py::class_<Dataset>(m, "Dataset")
      .def(py::init<>())
      .def(py::init<std::vector<Example>>(), py::arg("examples"))
      .def("__len__", &Dataset::size)
      .def("__getitem__",
           [](const Dataset& d, std::size_t i) {
             if (i >= d.size()) throw py::index_error();
             return d[i];
           })
      .def_property_readonly("examples", &Dataset::examples)
      .def_property_readonly("labels", [](const Dataset& d) { return d.label_inventory().labels(); });

  m.def("parse_corpus", [](const std::string& text) { return parse_corpus(text); }, py::arg("text"));
  m.def("serialize_corpus", &serialize_corpus, py::arg("dataset"));
  m.def("read_corpus", &read_corpus, py::arg("path"));
  m.def("write_corpus", &write_corpus, py::arg("dataset"), py::arg("path"));
  m.def("category_distribution", &category_distribution, py::arg("dataset"));

  py::class_<TrainedModel>(m, "Model")
      .def_property_readonly("method", [](const TrainedModel& t) { return std::string(to_string(t.spec.method)); })
      .def_property_readonly("feature_set", [](const TrainedModel& t) { return static_cast<int>(t.mode); })
      .def("predict", [](const TrainedModel& t, const py::object& x) { return t.predict(as_example(x)); },
           py::arg("example"), "Label for an Example or a bare sentence.")
      .def("evaluate", [](const TrainedModel& t, const Dataset& d) { return report_dict(evaluate(t, d)); },
           py::arg("dataset"))
      .def("save", [](const TrainedModel& t, const std::string& path) { save_model(t, path); }, py::arg("path"))
      .def("to_json", [](const TrainedModel& t) { return model_to_json(t).dump(); });

  m.def("load_model", &load_model, py::arg("path"));

  m.def(
      "train",
      [](const Dataset& d, const std::string& method, int fs, int degree, double C, const std::string& bias,
         std::size_t k, std::size_t max_suffix, bool strip_punct, unsigned threads) {
        const auto spec = make_spec(method, degree, C, bias, k, max_suffix, strip_punct);
        py::gil_scoped_release release;
        return train(spec, d, feature_set(fs), {}, threads);
      },
      py::arg("dataset"), LEARNER_ARGS, py::arg("threads") = 1);

  m.def(
      "cross_validate",
      [](const Dataset& d, const std::string& method, int fs, int degree, double C, const std::string& bias,
         std::size_t k, std::size_t max_suffix, bool strip_punct, std::size_t folds, std::uint64_t seed,
         unsigned threads) {
        const auto spec = make_spec(method, degree, C, bias, k, max_suffix, strip_punct);
        PrecisionReport r;
        {
          py::gil_scoped_release release;
          r = cross_validate(spec, d, split_folds(d, folds, seed), feature_set(fs), threads);
        }
        return report_dict(r);
      },
      py::arg("dataset"), LEARNER_ARGS, py::arg("folds") = 10, py::arg("seed") = 0, py::arg("threads") = 1);

  m.def(
      "sign_test",
      [](std::size_t n_plus, std::size_t n_minus, double level) {
        const auto r = sign_test(n_plus, n_minus, level);
        py::dict d;
        d["n_plus"] = r.n_plus;
        d["n_minus"] = r.n_minus;
        d["p_value"] = r.p_value;
        d["significant"] = r.significant;
        d["exact"] = r.exact;
        return d;
      },
      py::arg("n_plus"), py::arg("n_minus"), py::arg("level") = 0.01);

  auto syn = m.def_submodule("synthetic", "Generated corpora");
  syn.def(
      "adverb_corpus",
      [](std::size_t size, double rate, std::uint64_t seed) { return synthetic::adverb_corpus({size, rate, seed}); },
      py::arg("size") = 2000, py::arg("adverb_rate") = 0.2, py::arg("seed") = 0);
  syn.def(
      "domain_corpus",
      [](std::size_t size, bool swap, std::uint64_t seed) { return synthetic::domain_corpus({size, swap, seed}); },
      py::arg("size") = 600, py::arg("swap_tense") = false, py::arg("seed") = 0);
  syn.def("dictionary_corpus", &synthetic::dictionary_corpus, py::arg("size"), py::arg("seed") = 0);
}
