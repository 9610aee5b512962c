// Python bindings: codec, scoring, metrics and the h1/h2 commands.
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

#include "crmoji/augmentation.hpp"
#include "crmoji/classifier.hpp"
#include "crmoji/error.hpp"
#include "crmoji/pipeline.hpp"

namespace py = pybind11;
using namespace crmoji;

namespace {

RunConfig make_config(const std::string& data_dir, const std::string& out_dir, std::uint64_t seed, std::size_t folds,
                      std::size_t trees, unsigned threads) {
  RunConfig c;
  c.paths = ResourcePaths::in_dir(data_dir.empty() ? default_data_dir() : data_dir);
  c.out_dir = out_dir;
  c.seed = seed;
  c.folds = folds;
  c.forest.n_trees = trees;
  c.threads = threads;
  return c;
}

py::dict metrics_dict(const EvalMetrics& m) {
  py::dict d;
  d["precision"] = m.precision;
  d["recall"] = m.recall;
  d["accuracy"] = m.accuracy;
  d["mcc"] = m.mcc;
  d["f1"] = m.f1;
  return d;
}

// Holds loaded tables so repeated calls skip file parsing.
class Toolkit {
 public:
  explicit Toolkit(const std::string& data_dir) {
    RunConfig c;
    c.paths = ResourcePaths::in_dir(data_dir.empty() ? default_data_dir() : data_dir);
    resources_ = load_resources(c, false);
  }

  py::dict normalize(const std::string& text) const {
    const auto nc = normalize_comment(text, resources_.codec);
    py::list tokens;
    for (const auto& t : nc.tokens) {
      py::dict d;
      d["glyph"] = t.glyph;
      d["form"] = std::string(to_string(t.source_form));
      d["source"] = t.source_text;
      d["span"] = py::make_tuple(t.span.start, t.span.end);
      tokens.append(d);
    }
    py::dict out;
    out["normalized"] = nc.normalized;
    out["stripped"] = nc.stripped;
    out["tokens"] = tokens;
    return out;
  }

  py::dict score(const std::string& text) const {
    const auto ch = compute_channels(normalize_comment(text, resources_.codec), resources_.sentiment);
    py::dict d;
    d["g_t"] = ch.g_t;
    d["cr_t"] = ch.cr_t;
    d["g_e"] = ch.g_e;
    d["cr_e"] = ch.cr_e;
    d["g_te"] = ch.g_te;
    d["unmatched"] = ch.unmatched_emoji_count;
    return d;
  }

 private:
  Resources resources_;
};

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Emoji-aware code review comment analysis";

  // translators run newest first, so the base goes in before the subclasses
  const auto base = py::register_exception<Error>(m, "Error", PyExc_RuntimeError);
  py::register_exception<LoadError>(m, "LoadError", base.ptr());
  py::register_exception<ValidationError>(m, "ValidationError", base.ptr());
  py::register_exception<UndefinedError>(m, "UndefinedError", base.ptr());

  m.def("default_data_dir", &default_data_dir);

  py::class_<Toolkit>(m, "Toolkit")
      .def(py::init<const std::string&>(), py::arg("data_dir") = "")
      .def("normalize", &Toolkit::normalize, py::arg("text"))
      .def("score", &Toolkit::score, py::arg("text"));

  m.def(
      "mcc",
      [](std::uint64_t tp, std::uint64_t fp, std::uint64_t tn, std::uint64_t fn) { return mcc({tp, fp, tn, fn}); },
      py::arg("tp"), py::arg("fp"), py::arg("tn"), py::arg("fn"));
  m.def(
      "pearson", [](const std::vector<double>& x, const std::vector<double>& y) { return pearson(x, y); },
      py::arg("x"), py::arg("y"));
  m.def(
      "stratified_folds",
      [](const std::vector<int>& labels, std::size_t k, std::uint64_t seed) { return stratified_folds(labels, k, seed); },
      py::arg("labels"), py::arg("k"), py::arg("seed") = 42);
  m.def(
      "cohen_kappa",
      [](const std::vector<std::string>& a, const std::vector<std::string>& b) {
        if (a.size() != b.size()) throw ValidationError("annotation lists differ in length");
        std::vector<AnnotationRecord> ra, rb;
        for (std::size_t i = 0; i < a.size(); ++i) {
          ra.push_back({std::to_string(i), "a", a[i]});
          rb.push_back({std::to_string(i), "b", b[i]});
        }
        return cohen_kappa(ra, rb).kappa;
      },
      py::arg("a"), py::arg("b"), "Glyph per item for each annotator; empty string means none.");

  m.def(
      "run_h2",
      [](const std::vector<std::string>& datasets, const std::string& out_dir, const std::vector<std::string>& modes,
         std::uint64_t seed, std::size_t folds, std::size_t trees, unsigned threads, const std::string& data_dir,
         const std::string& word_vectors, const std::string& emoji_vectors) {
        auto c = make_config(data_dir, out_dir, seed, folds, trees, threads);
        c.paths.word_vectors = word_vectors;
        c.paths.emoji_vectors = emoji_vectors;
        std::vector<H2Mode> parsed;
        for (const auto& s : modes) parsed.push_back(parse_h2_mode(s));
        std::ostringstream log;
        H2Result r;
        {
          py::gil_scoped_release release;
          r = cmd_h2(c, datasets, parsed, log);
        }
        py::list metrics;
        for (const auto& row : r.metrics) {
          auto d = metrics_dict(row.metrics);
          d["dataset"] = row.dataset;
          d["mode"] = row.mode;
          metrics.append(d);
        }
        py::list deltas;
        for (const auto& row : r.deltas) {
          py::dict d;
          d["dataset"] = row.dataset;
          d["mode"] = row.mode;
          d["precision"] = row.precision;
          d["recall"] = row.recall;
          d["accuracy"] = row.accuracy;
          d["mcc"] = row.mcc;
          d["f1"] = row.f1;
          deltas.append(d);
        }
        py::dict out;
        out["metrics"] = metrics;
        out["deltas"] = deltas;
        out["log"] = log.str();
        return out;
      },
      py::arg("datasets"), py::arg("out_dir") = ".", py::arg("modes") = std::vector<std::string>{"features"},
      py::arg("seed") = 42, py::arg("folds") = 10, py::arg("trees") = 100, py::arg("threads") = 0,
      py::arg("data_dir") = "", py::arg("word_vectors") = "", py::arg("emoji_vectors") = "");

  m.def(
      "run_h1",
      [](const std::vector<std::string>& datasets, const std::string& out_dir, const std::string& data_dir) {
        const auto c = make_config(data_dir, out_dir, 42, 10, 100, 0);
        std::ostringstream log;
        const auto r = cmd_h1(c, datasets, log);
        py::list cells;
        for (const auto& cell : r.pooled.cells) {
          py::dict d;
          d["channel"] = cell.channel;
          d["target"] = cell.target;
          d["subset"] = cell.subset;
          d["rho"] = cell.rho ? py::cast(*cell.rho) : py::none();
          d["n"] = cell.n;
          cells.append(d);
        }
        return cells;
      },
      py::arg("datasets"), py::arg("out_dir") = ".", py::arg("data_dir") = "");
}
