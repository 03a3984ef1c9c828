#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "termrank/pipeline.hpp"

namespace {

using termrank::PipelineConfig;
using termrank::RunOptions;

struct CommonArgs {
    std::string config_path;
    std::string out_dir;
    int jobs = 1;
};

struct Overrides {
    std::optional<std::string> corpus, lexicon, gold, external_scores, topic_model, candidates,
        preferred_types;
    std::optional<int> window, topics, lda_iterations, max_iter, infer_iterations;
    std::optional<double> damping, d, rrf_k, threshold, alpha, beta, tol;
    std::optional<std::uint64_t> seed;
    std::optional<std::string> method;
    std::optional<bool> uniform_jump;
    std::optional<std::string> ns;        // comma-separated cutoffs
    std::vector<std::string> enable;
    std::vector<std::string> disable;
};

void add_common(CLI::App* cmd, CommonArgs& args, bool out_required = true) {
    cmd->add_option("-c,--config", args.config_path, "JSON config file");
    auto* out = cmd->add_option("-o,--out", args.out_dir, "output directory for this run");
    if (out_required) {
        out->required();
    }
    cmd->add_option("-j,--jobs", args.jobs, "worker threads for per-document work")
        ->check(CLI::PositiveNumber);
}

void add_overrides(CLI::App* cmd, Overrides& o) {
    cmd->add_option("--corpus", o.corpus, "corpus JSONL path");
    cmd->add_option("--lexicon", o.lexicon, "lexicon TSV path");
    cmd->add_option("--gold", o.gold, "gold annotations JSONL path");
    cmd->add_option("--external-scores", o.external_scores, "external score TSV path");
    cmd->add_option("--topic-model", o.topic_model, "trained topic model JSON path");
    cmd->add_option("--candidates", o.candidates, "directory of pre-extracted candidate JSONL");
    cmd->add_option("--preferred-types", o.preferred_types, "preferred semantic types file");
    cmd->add_option("--window", o.window, "co-occurrence window size");
    cmd->add_option("--damping", o.damping, "word-graph damping factor");
    cmd->add_option("--d", o.d, "mixing weight of graph transitions vs score jumps");
    cmd->add_option("--rrf-k", o.rrf_k, "reciprocal rank fusion constant");
    cmd->add_option("--threshold", o.threshold, "familiarity threshold");
    cmd->add_option("--topics", o.topics, "topic count");
    cmd->add_option("--lda-iterations", o.lda_iterations, "training sweeps");
    cmd->add_option("--infer-iterations", o.infer_iterations, "fold-in sweeps");
    cmd->add_option("--alpha", o.alpha, "document-topic prior (<= 0 means 50/topics)");
    cmd->add_option("--beta", o.beta, "topic-word prior");
    cmd->add_option("--seed", o.seed, "root random seed");
    cmd->add_option("--tol", o.tol, "walk convergence tolerance");
    cmd->add_option("--max-iter", o.max_iter, "walk iteration cap");
    cmd->add_option("--method", o.method, "fusion method or single view");
    cmd->add_flag("--uniform-jump", [&o](std::int64_t) { o.uniform_jump = true; },
                  "use a uniform jump distribution");
    cmd->add_option("--n", o.ns, "comma-separated evaluation cutoffs, e.g. 5,10");
    cmd->add_option("--enable", o.enable, "enable a ranker (repeatable)");
    cmd->add_option("--disable", o.disable, "disable a ranker (repeatable)");
}

std::vector<int> parse_int_list(const std::string& text) {
    std::vector<int> values;
    std::size_t start = 0;
    while (start <= text.size()) {
        std::size_t pos = text.find(',', start);
        std::string piece =
            pos == std::string::npos ? text.substr(start) : text.substr(start, pos - start);
        if (!piece.empty()) {
            values.push_back(std::stoi(piece));
        }
        if (pos == std::string::npos) {
            break;
        }
        start = pos + 1;
    }
    return values;
}

std::vector<double> parse_double_list(const std::string& text) {
    std::vector<double> values;
    std::size_t start = 0;
    while (start <= text.size()) {
        std::size_t pos = text.find(',', start);
        std::string piece =
            pos == std::string::npos ? text.substr(start) : text.substr(start, pos - start);
        if (!piece.empty()) {
            values.push_back(std::stod(piece));
        }
        if (pos == std::string::npos) {
            break;
        }
        start = pos + 1;
    }
    return values;
}

void set_ranker_flag(PipelineConfig& config, const std::string& name, bool value) {
    if (name == "tfidf") {
        config.use_tfidf = value;
    } else if (name == "singlerank") {
        config.use_singlerank = value;
    } else if (name == "topic") {
        config.use_topic = value;
    } else if (name == "external") {
        config.use_external = value;
    } else if (name == "unfamiliarity") {
        config.use_unfamiliarity = value;
    } else if (name == "semantic") {
        config.use_semantic = value;
    } else {
        throw termrank::ConfigError("unknown ranker \"" + name + "\"");
    }
}

PipelineConfig build_config(const CommonArgs& args, const Overrides& o) {
    PipelineConfig config;
    if (!args.config_path.empty()) {
        config = termrank::load_config(args.config_path);
    }
    auto path = [](const std::string& value) { return std::filesystem::absolute(value); };
    if (o.corpus) config.corpus = path(*o.corpus);
    if (o.lexicon) config.lexicon = path(*o.lexicon);
    if (o.gold) config.gold = path(*o.gold);
    if (o.external_scores) config.external_scores = path(*o.external_scores);
    if (o.topic_model) config.topic_model = path(*o.topic_model);
    if (o.candidates) config.candidates_dir = path(*o.candidates);
    if (o.preferred_types) config.preferred_types = path(*o.preferred_types);
    if (o.window) config.window = *o.window;
    if (o.damping) config.damping = *o.damping;
    if (o.d) config.d = *o.d;
    if (o.rrf_k) config.rrf_k = *o.rrf_k;
    if (o.threshold) config.familiarity_threshold = *o.threshold;
    if (o.topics) config.topics = *o.topics;
    if (o.lda_iterations) config.lda_iterations = *o.lda_iterations;
    if (o.infer_iterations) config.infer_iterations = *o.infer_iterations;
    if (o.alpha) config.alpha = *o.alpha;
    if (o.beta) config.beta = *o.beta;
    if (o.seed) config.seed = *o.seed;
    if (o.tol) config.tol = *o.tol;
    if (o.max_iter) config.max_iter = *o.max_iter;
    if (o.method) config.method = *o.method;
    if (o.uniform_jump) config.uniform_jump = *o.uniform_jump;
    if (o.ns) {
        config.ns = parse_int_list(*o.ns);
        if (config.ns.empty()) {
            throw termrank::ConfigError("--n requires at least one cutoff");
        }
    }
    for (const std::string& name : o.enable) {
        set_ranker_flag(config, name, true);
    }
    for (const std::string& name : o.disable) {
        set_ranker_flag(config, name, false);
    }
    return config;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"ranks candidate terms in documents by fusing heterogeneous views"};
    app.require_subcommand(1);

    CommonArgs args;
    Overrides overrides;

    auto* extract = app.add_subcommand("extract", "extract candidate terms per document");
    add_common(extract, args);
    add_overrides(extract, overrides);

    auto* rank = app.add_subcommand("rank", "rank candidates with a fusion method or single view");
    add_common(rank, args);
    add_overrides(rank, overrides);

    std::string rankings_dir;
    auto* eval = app.add_subcommand("eval", "score rankings against gold annotations");
    add_common(eval, args);
    add_overrides(eval, overrides);
    eval->add_option("--rankings", rankings_dir, "directory of ranking TSVs")->required();

    std::string d_values_text;
    auto* sweep = app.add_subcommand("sweep-d", "evaluate fit across a grid of d values");
    add_common(sweep, args);
    add_overrides(sweep, overrides);
    sweep->add_option("--d-values", d_values_text, "comma-separated d grid (default 0,0.1,...,1)");

    auto* train = app.add_subcommand("train-lda", "train the topic model");
    add_common(train, args);
    add_overrides(train, overrides);

    auto* select = app.add_subcommand("select-types", "select preferred semantic types");
    add_common(select, args);
    add_overrides(select, overrides);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        PipelineConfig config = build_config(args, overrides);
        RunOptions run;
        run.out_dir = std::filesystem::absolute(args.out_dir);
        run.jobs = args.jobs;
        if (extract->parsed()) {
            termrank::cmd_extract(config, run);
        } else if (rank->parsed()) {
            termrank::cmd_rank(config, config.method, run);
        } else if (eval->parsed()) {
            termrank::cmd_eval(config, std::filesystem::absolute(rankings_dir), run);
        } else if (sweep->parsed()) {
            std::vector<double> d_values = d_values_text.empty()
                                               ? termrank::default_d_grid()
                                               : parse_double_list(d_values_text);
            termrank::cmd_sweep_d(config, d_values, run);
        } else if (train->parsed()) {
            termrank::cmd_train_lda(config, run);
        } else if (select->parsed()) {
            termrank::cmd_select_types(config, run);
        }
    } catch (const termrank::ConfigError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
