#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include "scriptid/classifier.hpp"
#include "scriptid/cli.hpp"
#include "scriptid/dataset.hpp"
#include "scriptid/synth.hpp"

namespace py = pybind11;
using namespace scriptid;

PYBIND11_MODULE(_scriptid, m) {
  m.doc() = "Directional-energy script identification: Otsu binarization, "
            "diagonal/row/column deviation features and per-script GMMs.";

  py::register_exception<Error>(m, "ScriptIdError");

  py::class_<GrayImage>(m, "GrayImage")
      .def(py::init<>())
      .def(py::init([](int rows, int cols, std::vector<std::uint8_t> pixels) {
             GrayImage img{rows, cols, std::move(pixels)};
             if (!img.valid()) throw Error("GrayImage: pixels length must be rows*cols");
             return img;
           }),
           py::arg("rows"), py::arg("cols"), py::arg("pixels"))
      .def_readonly("rows", &GrayImage::rows)
      .def_readonly("cols", &GrayImage::cols)
      .def_readonly("pixels", &GrayImage::pixels);

  py::class_<BinaryImage>(m, "BinaryImage")
      .def(py::init<>())
      .def(py::init([](int rows, int cols, std::vector<std::uint8_t> pixels) {
             BinaryImage img{rows, cols, std::move(pixels)};
             if (!img.valid()) throw Error("BinaryImage: pixels length must be rows*cols");
             for (auto p : img.pixels)
               if (p > 1) throw Error("BinaryImage: pixels must be 0 or 1");
             return img;
           }),
           py::arg("rows"), py::arg("cols"), py::arg("pixels"))
      .def_readonly("rows", &BinaryImage::rows)
      .def_readonly("cols", &BinaryImage::cols)
      .def_readonly("pixels", &BinaryImage::pixels);

  py::class_<SquareMatrix>(m, "SquareMatrix")
      .def(py::init<>())
      .def(py::init([](int n, std::vector<double> values) {
             if (values.size() != static_cast<std::size_t>(n) * n)
               throw Error("SquareMatrix: values length must be n*n");
             SquareMatrix a;
             a.n = n;
             a.values = std::move(values);
             return a;
           }),
           py::arg("n"), py::arg("values"))
      .def_readonly("n", &SquareMatrix::n)
      .def_readonly("values", &SquareMatrix::values);

  m.def("load_gray", &load_gray, py::arg("path"));
  m.def("save_pgm", &save_pgm, py::arg("image"), py::arg("path"));
  m.def("binary_to_gray", &binary_to_gray, py::arg("image"));
  m.def("png_supported", &png_supported);
  m.def("otsu_threshold", &otsu_threshold, py::arg("image"));
  m.def("binarize", &binarize, py::arg("image"), py::arg("threshold"));
  m.def("normalize_to_square", &normalize_to_square, py::arg("image"), py::arg("side"));
  m.def("flip_horizontal", &flip_horizontal, py::arg("matrix"));

  py::class_<WordFeatures>(m, "WordFeatures")
      .def_readonly("n", &WordFeatures::n)
      .def_readonly("f1", &WordFeatures::f1)
      .def_readonly("f2", &WordFeatures::f2)
      .def_readonly("f3", &WordFeatures::f3)
      .def_readonly("f4", &WordFeatures::f4)
      .def_readonly("f5", &WordFeatures::f5)
      .def_readonly("f6", &WordFeatures::f6);

  m.def("std_dev", [](const std::vector<double>& v) { return std_dev(v); }, py::arg("values"));
  m.def("diag_features", &diag_features, py::arg("matrix"));
  m.def("row_col_features", &row_col_features, py::arg("matrix"));
  m.def("extract_word_features", &extract_word_features, py::arg("matrix"));
  m.def("frames_of", &frames_of, py::arg("word"));
  m.def("featurize_image", &featurize_image, py::arg("path"), py::arg("side") = 64);

  py::class_<GmmModel>(m, "GmmModel")
      .def(py::init<>())
      .def_readwrite("order", &GmmModel::order)
      .def_readwrite("dim", &GmmModel::dim)
      .def_readwrite("weights", &GmmModel::weights)
      .def_readwrite("means", &GmmModel::means)
      .def_readwrite("variances", &GmmModel::variances);

  py::class_<FitReport>(m, "FitReport")
      .def_readonly("iterations", &FitReport::iterations)
      .def_readonly("log_likelihood_trace", &FitReport::log_likelihood_trace)
      .def_readonly("converged", &FitReport::converged);

  py::class_<EmOptions>(m, "EmOptions")
      .def(py::init<>())
      .def_readwrite("max_iter", &EmOptions::max_iter)
      .def_readwrite("rel_tol", &EmOptions::rel_tol)
      .def_readwrite("variance_floor", &EmOptions::variance_floor);

  m.def("log_density",
        [](const GmmModel& model, const std::vector<double>& y) {
          return log_density(model, y);
        },
        py::arg("model"), py::arg("y"));
  m.def("kmeans_init", &kmeans_init, py::arg("data"), py::arg("m"), py::arg("seed"),
        py::arg("variance_floor") = 1e-4);
  m.def("em_fit", &em_fit, py::arg("data"), py::arg("init"), py::arg("opts") = EmOptions{});
  m.def("avg_log_likelihood", &avg_log_likelihood, py::arg("model"), py::arg("frames"));
  m.def("save_gmm", &save_gmm, py::arg("model"), py::arg("path"));
  m.def("load_gmm", &load_gmm, py::arg("path"));

  py::class_<ScriptModelSet>(m, "ScriptModelSet")
      .def_readonly("side", &ScriptModelSet::side)
      .def_readonly("order", &ScriptModelSet::order)
      .def_readonly("models", &ScriptModelSet::models)
      .def("labels", &ScriptModelSet::labels);

  py::class_<EvalReport>(m, "EvalReport")
      .def_readonly("labels", &EvalReport::labels)
      .def_readonly("pred_labels", &EvalReport::pred_labels)
      .def_readonly("confusion", &EvalReport::confusion)
      .def_readonly("per_class_accuracy", &EvalReport::per_class_accuracy)
      .def_readonly("average_accuracy", &EvalReport::average_accuracy)
      .def("total", &EvalReport::total);

  m.def("train",
        [](const FeatureCorpus& corpus, int order, std::uint64_t seed, const EmOptions& opts) {
          return train(corpus, order, seed, opts);
        },
        py::arg("corpus"), py::arg("order"), py::arg("seed"), py::arg("opts") = EmOptions{});
  m.def("classify", &classify, py::arg("models"), py::arg("word"));
  m.def("evaluate", &evaluate, py::arg("models"), py::arg("test"));
  m.def("sweep_orders", &sweep_orders, py::arg("corpus"), py::arg("test"), py::arg("orders"),
        py::arg("seed"), py::arg("opts") = EmOptions{});
  m.def("save_model_set", &save_model_set, py::arg("models"), py::arg("path"));
  m.def("load_model_set", &load_model_set, py::arg("path"));

  py::class_<SweepRow>(m, "SweepRow")
      .def_readonly("order", &SweepRow::order)
      .def_readonly("label", &SweepRow::label)
      .def_readonly("accuracy", &SweepRow::accuracy);

  py::class_<SynthClassSpec>(m, "SynthClassSpec")
      .def(py::init<>())
      .def_readwrite("label", &SynthClassSpec::label)
      .def_readwrite("orientation_mix", &SynthClassSpec::orientation_mix)
      .def_readwrite("min_strokes", &SynthClassSpec::min_strokes)
      .def_readwrite("max_strokes", &SynthClassSpec::max_strokes)
      .def_readwrite("min_length", &SynthClassSpec::min_length)
      .def_readwrite("max_length", &SynthClassSpec::max_length)
      .def_readwrite("thickness", &SynthClassSpec::thickness);

  m.def("generate", &generate, py::arg("spec"), py::arg("side"), py::arg("count"),
        py::arg("seed"));
  m.def("default_four_class", &default_four_class);
  m.def("write_corpus", &write_corpus, py::arg("specs"), py::arg("side"),
        py::arg("per_class"), py::arg("seed"), py::arg("out_dir"));
}
