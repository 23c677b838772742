#include <chrono>
#include <cstdio>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "acnn/errors.hpp"
#include "acnn/pipeline.hpp"

namespace {

// exit codes: 0 success, 1 usage/config, 2 data/format, 3 numerical failure
constexpr int kExitUsage = 1;
constexpr int kExitData = 2;
constexpr int kExitNumeric = 3;

acnn::Variant parse_variant(const std::string& name) {
    if (name == "atten1") return acnn::Variant::atten_emb1;
    if (name == "atten2") return acnn::Variant::atten_emb2;
    throw acnn::ConfigError("unknown variant '" + name + "' (expected atten1 or atten2)");
}

struct TrainArgs {
    acnn::TrainFiles files;
    std::string out;
    std::string variant = "atten2";
    std::string stopwords;
    acnn::TrainConfig config;
};

int cmd_train(TrainArgs& args) {
    args.config.variant = parse_variant(args.variant);
    if (!args.stopwords.empty()) args.files.stopwords = args.stopwords;

    std::printf("training variant=%s dim=%zu filters=%zux%zu epochs=%zu seed=%llu\n",
                to_string(args.config.variant), args.config.dim, args.config.widths.size(),
                args.config.n_per_width, args.config.epochs,
                static_cast<unsigned long long>(args.config.seed));

    acnn::TrainOutput out = acnn::run_training(args.files, args.config,
        [](const acnn::EpochStats& s) {
            std::printf("epoch %3zu  train_loss %.6f  test_accuracy %.4f  test_macro_f1 %.4f\n",
                        s.epoch, s.train_loss, s.eval_accuracy, s.eval_macro_f1);
            std::fflush(stdout);
        });

    if (out.train_skipped > 0)
        std::fprintf(stderr, "warning: %zu training instances skipped (cleaned to empty)\n",
                     out.train_skipped);
    if (out.test_skipped > 0)
        std::fprintf(stderr, "warning: %zu test instances skipped (cleaned to empty)\n",
                     out.test_skipped);

    acnn::save_archive(out.archive, args.out);
    std::string history_path = args.out + ".history.tsv";
    acnn::write_history(out.history, history_path);

    std::printf("model written to %s\n", args.out.c_str());
    std::printf("history written to %s\n", history_path.c_str());
    if (!out.history.empty()) {
        const acnn::EpochStats& last = out.history.back();
        std::printf("accuracy=%.4f\n", last.eval_accuracy);
        std::printf("macro_f1=%.4f\n", last.eval_macro_f1);
    }
    return 0;
}

struct EvalArgs {
    std::string model;
    std::string data_test;
    std::string stopwords;
};

int cmd_eval(const EvalArgs& args) {
    acnn::ModelArchive archive = acnn::load_archive(args.model);
    std::optional<std::string> stopwords;
    if (!args.stopwords.empty()) stopwords = args.stopwords;
    acnn::EvalResult result = acnn::evaluate_file(archive, args.data_test, stopwords);
    std::printf("evaluated %zu examples (%zu skipped)\n", result.evaluated, result.skipped);
    std::printf("accuracy=%.4f\n", result.accuracy);
    std::printf("macro_f1=%.4f\n", result.macro_f1);
    return 0;
}

struct PredictArgs {
    std::string model;
    std::string sentence;
    std::string aspect;
    std::string stopwords;
};

int cmd_predict(const PredictArgs& args) {
    acnn::ModelArchive archive = acnn::load_archive(args.model);
    std::optional<std::string> stopwords;
    if (!args.stopwords.empty()) stopwords = args.stopwords;
    acnn::Prediction pred = acnn::predict(archive, args.sentence, args.aspect, stopwords);
    std::printf("label=%s\n", to_string(pred.label));
    std::printf("p_positive=%.4f\n", pred.probs[0]);
    std::printf("p_neutral=%.4f\n", pred.probs[1]);
    std::printf("p_negative=%.4f\n", pred.probs[2]);
    return 0;
}

struct GradCheckArgs {
    std::uint64_t seed = 1;
    std::size_t dims = 8;
    bool corrupt = false;
};

int cmd_gradcheck(const GradCheckArgs& args) {
    constexpr double kLimit = 1e-4;
    double hook = args.corrupt ? 1e-2 : 0.0;
    auto start = std::chrono::steady_clock::now();
    double err1 = acnn::tiny_grad_check(args.seed, args.dims, acnn::Variant::atten_emb1, hook);
    double err2 = acnn::tiny_grad_check(args.seed, args.dims, acnn::Variant::atten_emb2, hook);
    double elapsed = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    double worst = std::max(err1, err2);
    std::printf("atten1 max relative error: %.3e\n", err1);
    std::printf("atten2 max relative error: %.3e\n", err2);
    std::printf("max_relative_error=%.3e (limit %.0e, %.2f s)\n", worst, kLimit, elapsed);
    if (worst > kLimit) {
        std::fprintf(stderr, "gradient check failed\n");
        return kExitNumeric;
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Aspect-level sentiment classifier: attention-based input encodings "
                 "over a multi-width convolutional network"};
    app.require_subcommand(1);

    TrainArgs train_args;
    CLI::App* train = app.add_subcommand("train", "Train a model and write an archive");
    train->add_option("--data-train", train_args.files.data_train, "Training set (3-line format)")
        ->required();
    train->add_option("--data-test", train_args.files.data_test, "Test set (3-line format)")
        ->required();
    train->add_option("--vectors", train_args.files.vectors,
                      "Pretrained vectors, GloVe text format")
        ->required();
    train->add_option("--out", train_args.out, "Output archive path")->required();
    train->add_option("--variant", train_args.variant, "Input encoding: atten1 or atten2")
        ->capture_default_str();
    train->add_option("--epochs", train_args.config.epochs, "Training epochs")
        ->capture_default_str();
    train->add_option("--batch-size", train_args.config.batch_size, "Mini-batch size")
        ->capture_default_str();
    train->add_option("--lr", train_args.config.learning_rate, "Adam learning rate")
        ->capture_default_str();
    train->add_option("--l2", train_args.config.l2_lambda, "L2 weight on the softmax layer")
        ->capture_default_str();
    train->add_option("--keep-prob", train_args.config.keep_prob,
                      "Dropout keep probability on the pooled layer")
        ->capture_default_str();
    train->add_option("--filter-widths", train_args.config.widths, "Convolution filter widths")
        ->delimiter(',')
        ->capture_default_str();
    train->add_option("--filters-per-width", train_args.config.n_per_width, "Filters per width")
        ->capture_default_str();
    train->add_option("--dim", train_args.config.dim, "Word vector dimension")
        ->capture_default_str();
    train->add_option("--seed", train_args.config.seed, "Random seed")
        ->envname("ACNN_SEED")
        ->capture_default_str();
    train->add_option("--stopwords", train_args.stopwords, "Stop-word list override");

    EvalArgs eval_args;
    CLI::App* eval = app.add_subcommand("eval", "Evaluate an archive on a test set");
    eval->add_option("--model", eval_args.model, "Model archive")->required();
    eval->add_option("--data-test", eval_args.data_test, "Test set (3-line format)")->required();
    eval->add_option("--stopwords", eval_args.stopwords, "Stop-word list override");

    PredictArgs predict_args;
    CLI::App* predict = app.add_subcommand("predict", "Classify one (sentence, aspect) pair");
    predict->add_option("--model", predict_args.model, "Model archive")->required();
    predict->add_option("--sentence", predict_args.sentence, "Sentence text")->required();
    predict->add_option("--aspect", predict_args.aspect, "Aspect phrase")->required();
    predict->add_option("--stopwords", predict_args.stopwords, "Stop-word list override");

    GradCheckArgs gc_args;
    CLI::App* gradcheck = app.add_subcommand(
        "grad-check", "Verify analytic gradients against central finite differences");
    gradcheck->add_option("--seed", gc_args.seed, "Random seed")
        ->envname("ACNN_SEED")
        ->capture_default_str();
    gradcheck->add_option("--dims", gc_args.dims, "Embedding dimension of the probe model")
        ->capture_default_str();
    gradcheck->add_flag("--corrupt", gc_args.corrupt,
                        "Corrupt one analytic coordinate (negative control)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : kExitUsage;
    }

    try {
        if (train->parsed()) return cmd_train(train_args);
        if (eval->parsed()) return cmd_eval(eval_args);
        if (predict->parsed()) return cmd_predict(predict_args);
        if (gradcheck->parsed()) return cmd_gradcheck(gc_args);
    } catch (const acnn::ConfigError& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kExitUsage;
    } catch (const acnn::NumericError& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kExitNumeric;
    } catch (const acnn::DataError& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kExitData;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kExitData;
    }
    return kExitUsage;
}
