#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

#include "acnn/errors.hpp"
#include "acnn/pipeline.hpp"

namespace py = pybind11;

namespace {

acnn::Variant parse_variant(const std::string& name) {
    if (name == "atten1") return acnn::Variant::atten_emb1;
    if (name == "atten2") return acnn::Variant::atten_emb2;
    throw acnn::ConfigError("unknown variant '" + name + "' (expected atten1 or atten2)");
}

acnn::SentenceMatrix to_sentence(const std::vector<std::vector<double>>& rows) {
    if (rows.empty()) throw acnn::ConfigError("sentence must have at least one row");
    acnn::SentenceMatrix x;
    x.true_length = rows.size();
    x.rows = acnn::Matrix(rows.size(), rows[0].size());
    for (std::size_t i = 0; i < rows.size(); ++i) {
        if (rows[i].size() != rows[0].size())
            throw acnn::ConfigError("sentence rows must share one dimension");
        std::copy(rows[i].begin(), rows[i].end(), x.rows.row(i).begin());
    }
    return x;
}

std::vector<std::vector<double>> to_lists(const acnn::Matrix& m, std::size_t n_rows) {
    std::vector<std::vector<double>> out(n_rows);
    for (std::size_t i = 0; i < n_rows; ++i) {
        auto row = m.row(i);
        out[i].assign(row.begin(), row.end());
    }
    return out;
}

acnn::ConfusionMatrix to_confusion(const std::vector<std::vector<std::int64_t>>& counts) {
    if (counts.size() != 3) throw acnn::ConfigError("confusion matrix must be 3x3");
    acnn::ConfusionMatrix cm;
    for (std::size_t r = 0; r < 3; ++r) {
        if (counts[r].size() != 3) throw acnn::ConfigError("confusion matrix must be 3x3");
        for (std::size_t c = 0; c < 3; ++c) cm.counts[r][c] = counts[r][c];
    }
    return cm;
}

py::dict prediction_dict(const acnn::Prediction& pred) {
    py::dict probs;
    probs["positive"] = pred.probs[0];
    probs["neutral"] = pred.probs[1];
    probs["negative"] = pred.probs[2];
    py::dict out;
    out["label"] = std::string(acnn::to_string(pred.label));
    out["probs"] = probs;
    return out;
}

py::list history_list(const std::vector<acnn::EpochStats>& history) {
    py::list rows;
    for (const acnn::EpochStats& s : history) {
        py::dict row;
        row["epoch"] = s.epoch;
        row["train_loss"] = s.train_loss;
        row["test_accuracy"] = s.eval_accuracy;
        row["test_macro_f1"] = s.eval_macro_f1;
        rows.append(row);
    }
    return rows;
}

class Classifier {
public:
    explicit Classifier(const std::string& path) : archive_(acnn::load_archive(path)) {}

    py::dict predict(const std::string& sentence, const std::string& aspect) const {
        return prediction_dict(acnn::predict(archive_, sentence, aspect));
    }

    py::dict evaluate(const std::string& test_path) const {
        acnn::EvalResult r = acnn::evaluate_file(archive_, test_path);
        py::dict out;
        out["accuracy"] = r.accuracy;
        out["macro_f1"] = r.macro_f1;
        out["evaluated"] = r.evaluated;
        out["skipped"] = r.skipped;
        return out;
    }

    std::string variant() const { return acnn::to_string(archive_.variant); }
    std::size_t maxlen() const { return archive_.maxlen; }
    std::size_t dim() const { return archive_.dim; }
    std::size_t vocab_size() const { return archive_.vocab.size(); }

private:
    acnn::ModelArchive archive_;
};

}  // namespace

PYBIND11_MODULE(_acnn, m) {
    m.doc() = "Aspect-level sentiment classification with attention-based input "
              "encodings over a multi-width convolutional network";

    py::register_exception<acnn::DataError>(m, "DataError", PyExc_ValueError);
    py::register_exception<acnn::ConfigError>(m, "ConfigError", PyExc_ValueError);
    py::register_exception<acnn::NumericError>(m, "NumericError", PyExc_ArithmeticError);

    m.def("clean_tokens",
          [](const std::string& text) { return acnn::clean_tokens(text); },
          py::arg("text"),
          "Lowercase, strip non-alphabetic characters, split on whitespace.");

    m.def("preprocess",
          [](const std::string& text, const std::unordered_set<std::string>& protected_tokens) {
              return acnn::preprocess(text, protected_tokens);
          },
          py::arg("text"), py::arg("protected_tokens") = std::unordered_set<std::string>{},
          "Clean and tokenize, dropping stop words; protected tokens always survive.");

    m.def("parse_dataset",
          [](const std::string& text) {
              py::list out;
              for (const acnn::RawInstance& inst : acnn::parse_dataset(text))
                  out.append(py::make_tuple(inst.sentence_template, inst.aspect_text,
                                            std::string(acnn::to_string(inst.label))));
              return out;
          },
          py::arg("text"),
          "Parse the 3-line dataset format into (sentence, aspect, label) tuples.");

    m.def("cosine",
          [](const std::vector<double>& u, const std::vector<double>& v) {
              return acnn::cosine(u, v);
          },
          py::arg("u"), py::arg("v"));

    m.def("attention_weights",
          [](const std::vector<std::vector<double>>& x, const std::vector<double>& aspect) {
              acnn::AttentionWeights aw = acnn::attention_weights(to_sentence(x), aspect);
              return py::make_tuple(aw.scores, aw.weights);
          },
          py::arg("sentence"), py::arg("aspect"),
          "Per-word cosine scores against the aspect and their softmax weights.");

    m.def("atten_emb1",
          [](const std::vector<std::vector<double>>& x, const std::vector<double>& aspect) {
              acnn::AttendedSentence s = acnn::atten_emb1(to_sentence(x), aspect);
              return to_lists(s.rows, s.true_length);
          },
          py::arg("sentence"), py::arg("aspect"),
          "Each row becomes [x_i ; weight_i * x_i].");

    m.def("atten_emb2",
          [](const std::vector<std::vector<double>>& x, const std::vector<double>& aspect) {
              acnn::AttendedSentence s = acnn::atten_emb2(to_sentence(x), aspect);
              return to_lists(s.rows, s.true_length);
          },
          py::arg("sentence"), py::arg("aspect"), "Each row becomes [x_i ; aspect].");

    m.def("accuracy",
          [](const std::vector<std::vector<std::int64_t>>& cm) {
              return acnn::accuracy(to_confusion(cm));
          },
          py::arg("confusion"), "Trace over total of a 3x3 gold x predicted matrix.");

    m.def("macro_f1",
          [](const std::vector<std::vector<std::int64_t>>& cm) {
              return acnn::macro_f1(to_confusion(cm));
          },
          py::arg("confusion"), "Unweighted mean of per-class F1 scores.");

    m.def("grad_check",
          [](std::uint64_t seed, std::size_t dim, const std::string& variant) {
              return acnn::tiny_grad_check(seed, dim, parse_variant(variant));
          },
          py::arg("seed") = 1, py::arg("dim") = 8, py::arg("variant") = "atten2",
          "Max relative error of analytic gradients vs central finite differences.");

    m.def("train",
          [](const std::string& data_train, const std::string& data_test,
             const std::string& vectors, const std::string& out, const std::string& variant,
             std::size_t dim, std::vector<std::size_t> widths, std::size_t filters_per_width,
             std::size_t epochs, std::size_t batch_size, double lr, double l2,
             double keep_prob, std::uint64_t seed) {
              acnn::TrainConfig config;
              config.variant = parse_variant(variant);
              config.dim = dim;
              config.widths = std::move(widths);
              config.n_per_width = filters_per_width;
              config.epochs = epochs;
              config.batch_size = batch_size;
              config.learning_rate = lr;
              config.l2_lambda = l2;
              config.keep_prob = keep_prob;
              config.seed = seed;
              acnn::TrainFiles files{data_train, data_test, vectors, {}};
              acnn::TrainOutput result = [&] {
                  // long-running, pure C++: let other python threads proceed
                  py::gil_scoped_release release;
                  return acnn::run_training(files, config);
              }();
              acnn::save_archive(result.archive, out);
              return history_list(result.history);
          },
          py::arg("data_train"), py::arg("data_test"), py::arg("vectors"), py::arg("out"),
          py::arg("variant") = "atten2", py::arg("dim") = 200,
          py::arg("widths") = std::vector<std::size_t>{2, 3, 4},
          py::arg("filters_per_width") = 200, py::arg("epochs") = 30,
          py::arg("batch_size") = 64, py::arg("lr") = 0.001, py::arg("l2") = 2.6,
          py::arg("keep_prob") = 0.5, py::arg("seed") = 1,
          "Train on dataset files, write the model archive to `out`, and return "
          "the per-epoch history.");

    py::class_<Classifier>(m, "Classifier")
        .def(py::init<const std::string&>(), py::arg("path"))
        .def("predict", &Classifier::predict, py::arg("sentence"), py::arg("aspect"))
        .def("evaluate", &Classifier::evaluate, py::arg("data_test"))
        .def_property_readonly("variant", &Classifier::variant)
        .def_property_readonly("maxlen", &Classifier::maxlen)
        .def_property_readonly("dim", &Classifier::dim)
        .def_property_readonly("vocab_size", &Classifier::vocab_size);

#ifdef VERSION_INFO
    m.attr("__version__") = VERSION_INFO;
#else
    m.attr("__version__") = "0.1.0";
#endif
}
