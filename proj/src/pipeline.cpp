#include "termrank/pipeline.hpp"

#include <algorithm>
#include <atomic>
#include <cstdio>
#include <functional>
#include <iostream>
#include <mutex>
#include <numeric>
#include <sstream>
#include <thread>

#include <nlohmann/json.hpp>

#include "termrank/corpus.hpp"
#include "termrank/topic_model.hpp"

namespace termrank {

using nlohmann::json;

namespace {

void validate_params(const PipelineConfig& config) {
    if (config.window < 2) throw ConfigError("params.window must be >= 2");
    if (config.damping <= 0.0 || config.damping >= 1.0)
        throw ConfigError("params.damping must lie in (0, 1)");
    if (config.d < 0.0 || config.d > 1.0) throw ConfigError("params.d must lie in [0, 1]");
    if (config.rrf_k <= 0.0) throw ConfigError("params.rrf_k must be positive");
    if (config.familiarity_threshold < 0.0 || config.familiarity_threshold > 1.0)
        throw ConfigError("params.familiarity_threshold must lie in [0, 1]");
    if (config.topics < 1) throw ConfigError("params.topics must be >= 1");
    if (config.lda_iterations < 1) throw ConfigError("params.lda_iterations must be >= 1");
    if (config.beta <= 0.0) throw ConfigError("params.beta must be positive");
    if (config.tol <= 0.0) throw ConfigError("params.tol must be positive");
    if (config.max_iter < 1) throw ConfigError("params.max_iter must be >= 1");
    if (config.infer_iterations < 1) throw ConfigError("params.infer_iterations must be >= 1");
    if (config.ns.empty()) throw ConfigError("eval.ns must not be empty");
    for (int n : config.ns) {
        if (n < 1) throw ConfigError("eval.ns entries must be >= 1");
    }
    if (std::find(known_methods().begin(), known_methods().end(), config.method) ==
        known_methods().end()) {
        throw ConfigError("unknown fusion method \"" + config.method + "\"");
    }
}

void reject_unknown_keys(const json& object, const std::vector<std::string>& known,
                         const std::string& where) {
    for (const auto& [key, value] : object.items()) {
        if (std::find(known.begin(), known.end(), key) == known.end()) {
            throw ConfigError("unknown config key \"" + where + key + "\"");
        }
    }
}

std::filesystem::path resolve(const std::filesystem::path& base, const std::string& value) {
    std::filesystem::path p(value);
    return p.is_absolute() ? p : base / p;
}

std::string sanitize_id(const std::string& doc_id) {
    std::string out;
    out.reserve(doc_id.size());
    for (char c : doc_id) {
        const bool ok = (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') ||
                        (c >= '0' && c <= '9') || c == '-' || c == '_' || c == '.';
        out.push_back(ok ? c : '_');
    }
    return out.empty() ? "_" : out;
}

void require_file(const std::filesystem::path& path, const std::string& role) {
    if (path.empty()) {
        throw ConfigError("missing required path: " + role);
    }
    if (!std::filesystem::exists(path)) {
        throw ConfigError(role + " does not exist: " + path.string());
    }
}

void write_manifest(const PipelineConfig& config, const RunOptions& run,
                    const std::string& command) {
    char fingerprint[32];
    std::snprintf(fingerprint, sizeof(fingerprint), "%016llx",
                  static_cast<unsigned long long>(fnv1a64(config.canonical_json())));
    json manifest{{"command", command},
                  {"config_fingerprint", fingerprint},
                  {"version", kToolVersion}};
    write_file_atomic(run.out_dir / "manifest.json", manifest.dump(2) + "\n");
}

// Runs fn(i) for i in [0, count), optionally on several worker threads.
// The first exception, if any, is rethrown on the calling thread.
void parallel_for(int jobs, std::size_t count, const std::function<void(std::size_t)>& fn) {
    if (jobs <= 1 || count <= 1) {
        for (std::size_t i = 0; i < count; ++i) {
            fn(i);
        }
        return;
    }
    const int workers = static_cast<int>(std::min<std::size_t>(count, jobs));
    std::atomic<std::size_t> next{0};
    std::exception_ptr error;
    std::mutex error_mutex;
    std::vector<std::thread> threads;
    threads.reserve(workers);
    for (int w = 0; w < workers; ++w) {
        threads.emplace_back([&] {
            while (true) {
                const std::size_t i = next.fetch_add(1);
                if (i >= count) {
                    return;
                }
                try {
                    fn(i);
                } catch (...) {
                    std::lock_guard<std::mutex> lock(error_mutex);
                    if (!error) {
                        error = std::current_exception();
                    }
                    return;
                }
            }
        });
    }
    for (auto& thread : threads) {
        thread.join();
    }
    if (error) {
        std::rethrow_exception(error);
    }
}

std::vector<std::string> read_type_lines(const std::filesystem::path& path) {
    std::vector<std::string> types;
    std::istringstream in(read_file(path));
    std::string line;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') {
            line.pop_back();
        }
        if (!line.empty() && line[0] != '#') {
            types.push_back(line);
        }
    }
    return types;
}

std::vector<std::string> split(const std::string& line, char sep) {
    std::vector<std::string> parts;
    std::size_t start = 0;
    while (true) {
        std::size_t pos = line.find(sep, start);
        if (pos == std::string::npos) {
            parts.push_back(line.substr(start));
            break;
        }
        parts.push_back(line.substr(start, pos - start));
        start = pos + 1;
    }
    return parts;
}

// Inputs shared by the rank and sweep commands, loaded once.
struct RankInputs {
    Corpus corpus;
    Lexicon lexicon;
    bool has_lexicon = false;
    ExternalScores external;
    TopicModel model;
    std::vector<std::string> preferred_types;

    bool tfidf = false;
    bool singlerank = false;
    bool topic = false;
    bool use_external = false;
    bool unfamiliarity = false;
    bool semantic = false;
};

bool ranker_enabled(const std::optional<bool>& flag, bool input_available,
                    const std::string& name, const std::string& requirement) {
    if (flag.has_value()) {
        if (*flag && !input_available) {
            throw ConfigError(name + " ranker enabled but " + requirement + " is not set");
        }
        return *flag;
    }
    return input_available;
}

RankInputs load_rank_inputs(const PipelineConfig& config, bool need_scored) {
    RankInputs inputs;
    require_file(config.corpus, "paths.corpus");

    const bool has_external = !config.external_scores.empty();
    const bool has_model = !config.topic_model.empty();
    const bool has_types = !config.preferred_types.empty();
    const bool has_lexicon = !config.lexicon.empty();

    inputs.tfidf = config.use_tfidf.value_or(true);
    inputs.singlerank = config.use_singlerank.value_or(true);
    inputs.topic = ranker_enabled(config.use_topic, has_model, "topic", "paths.topic_model");
    inputs.use_external =
        ranker_enabled(config.use_external, has_external, "external", "paths.external_scores");
    inputs.unfamiliarity = config.use_unfamiliarity.value_or(has_lexicon);
    inputs.semantic =
        ranker_enabled(config.use_semantic, has_types, "semantic", "paths.preferred_types");
    if (inputs.unfamiliarity && !has_lexicon && config.use_unfamiliarity.value_or(false)) {
        throw ConfigError("unfamiliarity ranker enabled but paths.lexicon is not set");
    }
    if (inputs.semantic && !has_lexicon) {
        throw ConfigError("semantic ranker requires paths.lexicon");
    }

    const bool any_scored = inputs.tfidf || inputs.singlerank || inputs.topic || inputs.use_external;
    if (need_scored && !any_scored && !config.uniform_jump) {
        throw ConfigError(
            "the selected fusion method needs a scored ranker (tfidf, singlerank, topic or "
            "external) or an explicit uniform jump");
    }

    if (config.candidates_dir.empty()) {
        require_file(config.lexicon, "paths.lexicon");
    } else {
        require_file(config.candidates_dir, "paths.candidates");
    }

    inputs.corpus = load_corpus(config.corpus);
    if (has_lexicon) {
        require_file(config.lexicon, "paths.lexicon");
        inputs.lexicon = load_lexicon(config.lexicon);
        inputs.has_lexicon = true;
    }
    if (inputs.use_external) {
        require_file(config.external_scores, "paths.external_scores");
        inputs.external = load_external_scores(config.external_scores);
    }
    if (inputs.topic) {
        require_file(config.topic_model, "paths.topic_model");
        inputs.model = load_topic_model(config.topic_model);
    }
    if (inputs.semantic) {
        require_file(config.preferred_types, "paths.preferred_types");
        inputs.preferred_types = read_type_lines(config.preferred_types);
        if (inputs.preferred_types.empty()) {
            throw ConfigError("preferred types file is empty: " +
                              config.preferred_types.string());
        }
    }
    return inputs;
}

std::vector<CandidateTerm> candidates_for(const PipelineConfig& config, const RankInputs& inputs,
                                          const Document& doc) {
    if (!config.candidates_dir.empty()) {
        const std::filesystem::path file =
            config.candidates_dir / (sanitize_id(doc.doc_id) + ".jsonl");
        if (!std::filesystem::exists(file)) {
            throw ValidationError("no candidate file for document " + doc.doc_id + ": " +
                                  file.string());
        }
        auto candidates = import_candidates(doc, file);
        if (inputs.has_lexicon) {
            link_candidates(candidates, inputs.lexicon);
        }
        return candidates;
    }
    return extract_candidates(doc, inputs.lexicon);
}

std::vector<RankerOutput> build_rankers(const PipelineConfig& config, const RankInputs& inputs,
                                        const Document& doc,
                                        const std::vector<CandidateTerm>& candidates) {
    std::vector<RankerOutput> rankers;
    if (inputs.tfidf) {
        rankers.push_back(tfidf_rank(doc, candidates, inputs.corpus));
    }
    if (inputs.singlerank) {
        rankers.push_back(singlerank_rank(doc, candidates, config.window, config.damping,
                                          config.tol, config.max_iter));
    }
    if (inputs.topic) {
        std::vector<double> theta;
        auto injected = inputs.model.doc_topics.find(doc.doc_id);
        if (injected != inputs.model.doc_topics.end()) {
            theta = injected->second;
        } else {
            theta = infer_doc_topics(inputs.model, doc, config.infer_iterations,
                                     config.seed ^ fnv1a64(doc.doc_id))
                        .theta;
        }
        rankers.push_back(topic_coherence_rank(candidates, inputs.model, theta));
    }
    if (inputs.use_external) {
        rankers.push_back(external_score_rank(candidates, inputs.external, doc.doc_id));
    }
    if (inputs.unfamiliarity && inputs.has_lexicon) {
        rankers.push_back(
            unfamiliarity_rank(candidates, inputs.lexicon, config.familiarity_threshold));
    }
    if (inputs.semantic) {
        rankers.push_back(semantic_type_rank(candidates, inputs.lexicon, inputs.preferred_types));
    }
    return rankers;
}

std::vector<std::string> term_ids_of(const std::vector<CandidateTerm>& candidates) {
    std::vector<std::string> ids;
    ids.reserve(candidates.size());
    for (const CandidateTerm& term : candidates) {
        ids.push_back(term.term_id);
    }
    return ids;
}

// Total order for a single scored view: score descending, then input
// (first-occurrence) position.
FusedRanking ranking_from_single(const std::string& method, const RankerOutput& output,
                                 const std::vector<std::string>& ids) {
    std::vector<double> scores(ids.size(), 0.0);
    for (std::size_t i = 0; i < ids.size(); ++i) {
        scores[i] = output.scores.at(ids[i]);
    }
    std::vector<std::size_t> order(ids.size());
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        if (scores[a] != scores[b]) {
            return scores[a] > scores[b];
        }
        return a < b;
    });
    FusedRanking result;
    result.method = method;
    int rank = 1;
    for (std::size_t i = 0; i < order.size(); ++i) {
        if (i > 0 && scores[order[i]] < scores[order[i - 1]]) {
            rank = static_cast<int>(i) + 1;
        }
        result.entries.emplace_back(ids[order[i]], scores[order[i]]);
        result.ranks.push_back(rank);
    }
    return result;
}

FusedRanking rank_document(const PipelineConfig& config, const RankInputs& inputs,
                           const std::string& method, const Document& doc,
                           const std::vector<CandidateTerm>& candidates,
                           const std::vector<RankerOutput>& rankers) {
    const std::vector<std::string> ids = term_ids_of(candidates);
    if (method == "fit") {
        FitOptions options;
        options.d = config.d;
        options.tol = config.tol;
        options.max_iter = config.max_iter;
        options.uniform_jump = config.uniform_jump;
        return fit_rank(ids, rankers, options);
    }
    if (method == "combsum") {
        return combsum_rank(ids, rankers);
    }
    if (method == "condorcet") {
        return condorcet_rank(ids, rankers);
    }
    if (method == "rrf") {
        return rrf_rank(ids, rankers, config.rrf_k);
    }
    // single views
    for (const RankerOutput& ranker : rankers) {
        if (ranker.ranker_id == method && ranker.kind == RankerKind::scored_total) {
            return ranking_from_single(method, ranker, ids);
        }
    }
    // The view was not part of the fusion set; compute it directly.
    if (method == "tfidf") {
        return ranking_from_single(method, tfidf_rank(doc, candidates, inputs.corpus), ids);
    }
    if (method == "singlerank") {
        return ranking_from_single(method,
                                   singlerank_rank(doc, candidates, config.window, config.damping,
                                                   config.tol, config.max_iter),
                                   ids);
    }
    throw ConfigError("method \"" + method + "\" is not computable with the current config");
}

std::string ranking_to_tsv(const std::string& doc_id, const FusedRanking& ranking) {
    std::string out = "doc_id\trank\tterm\tscore\tmethod\n";
    for (std::size_t i = 0; i < ranking.entries.size(); ++i) {
        out += doc_id;
        out += '\t';
        out += std::to_string(ranking.ranks[i]);
        out += '\t';
        out += ranking.entries[i].first;
        out += '\t';
        out += format_score(ranking.entries[i].second);
        out += '\t';
        out += ranking.method;
        out += '\n';
    }
    return out;
}

}  // namespace

std::string PipelineConfig::canonical_json() const {
    json paths{{"corpus", corpus.string()},
               {"lexicon", lexicon.string()},
               {"gold", gold.string()},
               {"external_scores", external_scores.string()},
               {"topic_model", topic_model.string()},
               {"candidates", candidates_dir.string()},
               {"preferred_types", preferred_types.string()}};
    json params{{"window", window},
                {"damping", damping},
                {"d", d},
                {"rrf_k", rrf_k},
                {"familiarity_threshold", familiarity_threshold},
                {"topics", topics},
                {"lda_iterations", lda_iterations},
                {"alpha", alpha},
                {"beta", beta},
                {"seed", seed},
                {"tol", tol},
                {"max_iter", max_iter},
                {"infer_iterations", infer_iterations}};
    auto flag = [](const std::optional<bool>& f) { return f ? json(*f) : json(nullptr); };
    json rankers{{"tfidf", flag(use_tfidf)},
                 {"singlerank", flag(use_singlerank)},
                 {"topic", flag(use_topic)},
                 {"external", flag(use_external)},
                 {"unfamiliarity", flag(use_unfamiliarity)},
                 {"semantic", flag(use_semantic)}};
    json all{{"paths", paths},
             {"params", params},
             {"rankers", rankers},
             {"fusion", json{{"method", method}, {"uniform_jump", uniform_jump}}},
             {"eval", json{{"ns", ns}}}};
    return all.dump();
}

PipelineConfig load_config(const std::filesystem::path& path) {
    json root;
    try {
        root = json::parse(read_file(path));
    } catch (const Error&) {
        throw ConfigError("cannot read config file: " + path.string());
    } catch (const json::exception& e) {
        throw ConfigError(path.string() + ": " + e.what());
    }
    if (!root.is_object()) {
        throw ConfigError(path.string() + ": config must be a JSON object");
    }
    reject_unknown_keys(root, {"paths", "params", "rankers", "fusion", "eval"}, "");

    PipelineConfig config;
    const std::filesystem::path base = path.parent_path();
    try {
        if (root.contains("paths")) {
            const json& paths = root.at("paths");
            reject_unknown_keys(paths,
                                {"corpus", "lexicon", "gold", "external_scores", "topic_model",
                                 "candidates", "preferred_types"},
                                "paths.");
            if (paths.contains("corpus")) config.corpus = resolve(base, paths.at("corpus"));
            if (paths.contains("lexicon")) config.lexicon = resolve(base, paths.at("lexicon"));
            if (paths.contains("gold")) config.gold = resolve(base, paths.at("gold"));
            if (paths.contains("external_scores"))
                config.external_scores = resolve(base, paths.at("external_scores"));
            if (paths.contains("topic_model"))
                config.topic_model = resolve(base, paths.at("topic_model"));
            if (paths.contains("candidates"))
                config.candidates_dir = resolve(base, paths.at("candidates"));
            if (paths.contains("preferred_types"))
                config.preferred_types = resolve(base, paths.at("preferred_types"));
        }
        if (root.contains("params")) {
            const json& params = root.at("params");
            reject_unknown_keys(params,
                                {"window", "damping", "d", "rrf_k", "familiarity_threshold",
                                 "topics", "lda_iterations", "alpha", "beta", "seed", "tol",
                                 "max_iter", "infer_iterations"},
                                "params.");
            config.window = params.value("window", config.window);
            config.damping = params.value("damping", config.damping);
            config.d = params.value("d", config.d);
            config.rrf_k = params.value("rrf_k", config.rrf_k);
            config.familiarity_threshold =
                params.value("familiarity_threshold", config.familiarity_threshold);
            config.topics = params.value("topics", config.topics);
            config.lda_iterations = params.value("lda_iterations", config.lda_iterations);
            config.alpha = params.value("alpha", config.alpha);
            config.beta = params.value("beta", config.beta);
            config.seed = params.value("seed", config.seed);
            config.tol = params.value("tol", config.tol);
            config.max_iter = params.value("max_iter", config.max_iter);
            config.infer_iterations = params.value("infer_iterations", config.infer_iterations);
        }
        if (root.contains("rankers")) {
            const json& rankers = root.at("rankers");
            reject_unknown_keys(
                rankers, {"tfidf", "singlerank", "topic", "external", "unfamiliarity", "semantic"},
                "rankers.");
            if (rankers.contains("tfidf")) config.use_tfidf = rankers.at("tfidf").get<bool>();
            if (rankers.contains("singlerank"))
                config.use_singlerank = rankers.at("singlerank").get<bool>();
            if (rankers.contains("topic")) config.use_topic = rankers.at("topic").get<bool>();
            if (rankers.contains("external"))
                config.use_external = rankers.at("external").get<bool>();
            if (rankers.contains("unfamiliarity"))
                config.use_unfamiliarity = rankers.at("unfamiliarity").get<bool>();
            if (rankers.contains("semantic"))
                config.use_semantic = rankers.at("semantic").get<bool>();
        }
        if (root.contains("fusion")) {
            const json& fusion = root.at("fusion");
            reject_unknown_keys(fusion, {"method", "uniform_jump"}, "fusion.");
            config.method = fusion.value("method", config.method);
            config.uniform_jump = fusion.value("uniform_jump", config.uniform_jump);
        }
        if (root.contains("eval")) {
            const json& eval = root.at("eval");
            reject_unknown_keys(eval, {"ns"}, "eval.");
            if (eval.contains("ns")) {
                config.ns = eval.at("ns").get<std::vector<int>>();
            }
        }
    } catch (const json::exception& e) {
        throw ConfigError(path.string() + ": " + e.what());
    }

    validate_params(config);
    return config;
}

const std::vector<std::string>& known_methods() {
    static const std::vector<std::string> methods = {
        "fit", "combsum", "condorcet", "rrf", "tfidf", "singlerank", "topic", "external"};
    return methods;
}

std::vector<double> default_d_grid() {
    std::vector<double> grid;
    for (int i = 0; i <= 10; ++i) {
        grid.push_back(static_cast<double>(i) / 10.0);
    }
    return grid;
}

void cmd_extract(const PipelineConfig& config, const RunOptions& run) {
    require_file(config.corpus, "paths.corpus");
    require_file(config.lexicon, "paths.lexicon");
    const Corpus corpus = load_corpus(config.corpus);
    const Lexicon lexicon = load_lexicon(config.lexicon);

    std::filesystem::create_directories(run.out_dir / "candidates");
    parallel_for(run.jobs, corpus.size(), [&](std::size_t i) {
        const Document& doc = corpus.documents[i];
        const auto candidates = extract_candidates(doc, lexicon);
        write_file_atomic(run.out_dir / "candidates" / (sanitize_id(doc.doc_id) + ".jsonl"),
                          candidates_to_jsonl(candidates));
    });
    write_manifest(config, run, "extract");
}

void cmd_rank(const PipelineConfig& config, const std::string& method, const RunOptions& run) {
    if (std::find(known_methods().begin(), known_methods().end(), method) ==
        known_methods().end()) {
        throw ConfigError("unknown method \"" + method + "\"");
    }
    if (method == "topic" && config.topic_model.empty()) {
        throw ConfigError("method topic requires paths.topic_model");
    }
    if (method == "external" && config.external_scores.empty()) {
        throw ConfigError("method external requires paths.external_scores");
    }
    const bool is_fusion = method == "fit" || method == "combsum" || method == "condorcet" ||
                           method == "rrf";
    const bool need_scored = method == "fit" || method == "combsum";

    // A single view ranks on its own; disable the others so their inputs
    // are neither required nor loaded.
    PipelineConfig effective = config;
    if (!is_fusion) {
        effective.use_tfidf = method == "tfidf";
        effective.use_singlerank = method == "singlerank";
        effective.use_topic = method == "topic";
        effective.use_external = method == "external";
        effective.use_unfamiliarity = false;
        effective.use_semantic = false;
    }
    const RankInputs inputs = load_rank_inputs(effective, need_scored);

    std::filesystem::create_directories(run.out_dir / "rankings");
    parallel_for(run.jobs, inputs.corpus.size(), [&](std::size_t i) {
        const Document& doc = inputs.corpus.documents[i];
        const auto candidates = candidates_for(effective, inputs, doc);
        std::string tsv;
        if (candidates.empty()) {
            tsv = "doc_id\trank\tterm\tscore\tmethod\n";
        } else {
            const auto rankers = build_rankers(effective, inputs, doc, candidates);
            const FusedRanking ranking =
                rank_document(effective, inputs, method, doc, candidates, rankers);
            tsv = ranking_to_tsv(doc.doc_id, ranking);
        }
        write_file_atomic(run.out_dir / "rankings" / (sanitize_id(doc.doc_id) + ".tsv"), tsv);
    });
    write_manifest(config, run, "rank");
}

std::map<std::string, std::vector<ScoredTerm>> load_rankings_dir(
    const std::filesystem::path& dir) {
    if (!std::filesystem::is_directory(dir)) {
        throw Error("rankings directory does not exist: " + dir.string());
    }
    std::vector<std::filesystem::path> files;
    for (const auto& entry : std::filesystem::directory_iterator(dir)) {
        if (entry.is_regular_file() && entry.path().extension() == ".tsv") {
            files.push_back(entry.path());
        }
    }
    std::sort(files.begin(), files.end());

    std::map<std::string, std::vector<ScoredTerm>> rankings;
    for (const auto& file : files) {
        std::istringstream in(read_file(file));
        std::string line;
        std::size_t line_no = 0;
        std::string doc_id = file.stem().string();
        std::vector<ScoredTerm> terms;
        while (std::getline(in, line)) {
            ++line_no;
            if (!line.empty() && line.back() == '\r') {
                line.pop_back();
            }
            if (line.empty() || line_no == 1) {  // header
                continue;
            }
            auto cols = split(line, '\t');
            if (cols.size() != 5) {
                throw ParseError(file.string() + ":" + std::to_string(line_no) +
                                 ": expected 5 columns");
            }
            doc_id = cols[0];
            ScoredTerm term;
            term.tokens = split(cols[2], ' ');
            try {
                term.score = std::stod(cols[3]);
            } catch (const std::exception&) {
                throw ParseError(file.string() + ":" + std::to_string(line_no) + ": bad score \"" +
                                 cols[3] + "\"");
            }
            terms.push_back(std::move(term));
        }
        if (!rankings.emplace(doc_id, std::move(terms)).second) {
            throw ValidationError("duplicate rankings for document " + doc_id);
        }
    }
    return rankings;
}

void cmd_eval(const PipelineConfig& config, const std::filesystem::path& rankings_dir,
              const RunOptions& run) {
    require_file(config.gold, "paths.gold");
    if (rankings_dir.empty()) {
        throw ConfigError("eval requires a rankings directory");
    }
    const auto rankings = load_rankings_dir(rankings_dir);
    const auto golds = load_gold(config.gold);

    std::vector<std::string> warnings;
    const EvalReport report = evaluate_corpus(rankings, golds, config.ns, &warnings);
    for (const std::string& warning : warnings) {
        std::cerr << "warning: " << warning << '\n';
    }
    std::filesystem::create_directories(run.out_dir);
    write_file_atomic(run.out_dir / "report.json", report_to_json(report));
    write_file_atomic(run.out_dir / "report.txt", report_to_table(report));
    write_manifest(config, run, "eval");
}

void cmd_sweep_d(const PipelineConfig& config, const std::vector<double>& d_values,
                 const RunOptions& run) {
    if (d_values.empty()) {
        throw ConfigError("sweep-d requires at least one d value");
    }
    for (double d : d_values) {
        if (d < 0.0 || d > 1.0) {
            throw ConfigError("sweep-d values must lie in [0, 1]");
        }
    }
    require_file(config.gold, "paths.gold");
    const RankInputs inputs = load_rank_inputs(config, /*need_scored=*/true);
    const auto golds = load_gold(config.gold);

    // Candidates and single views are independent of d; compute them once.
    struct DocState {
        const Document* doc;
        std::vector<CandidateTerm> candidates;
        std::vector<RankerOutput> rankers;
        std::vector<std::string> ids;
    };
    std::vector<DocState> states(inputs.corpus.size());
    parallel_for(run.jobs, inputs.corpus.size(), [&](std::size_t i) {
        DocState state;
        state.doc = &inputs.corpus.documents[i];
        state.candidates = candidates_for(config, inputs, *state.doc);
        if (!state.candidates.empty()) {
            state.rankers = build_rankers(config, inputs, *state.doc, state.candidates);
            state.ids = term_ids_of(state.candidates);
        }
        states[i] = std::move(state);
    });

    std::ostringstream out;
    out << "d";
    for (int n : config.ns) {
        out << "\tP" << n << "\tR" << n << "\tF" << n;
    }
    out << "\tauc_ranking\tauc_ke\n";

    char dbuf[32];
    for (double d : d_values) {
        std::map<std::string, std::vector<ScoredTerm>> rankings;
        for (const DocState& state : states) {
            std::vector<ScoredTerm> terms;
            if (!state.candidates.empty()) {
                FitOptions options;
                options.d = d;
                options.tol = config.tol;
                options.max_iter = config.max_iter;
                options.uniform_jump = config.uniform_jump;
                const FusedRanking ranking = fit_rank(state.ids, state.rankers, options);
                for (const auto& [term_id, score] : ranking.entries) {
                    terms.push_back(ScoredTerm{split(term_id, ' '), score});
                }
            }
            rankings.emplace(state.doc->doc_id, std::move(terms));
        }
        const EvalReport report = evaluate_corpus(rankings, golds, config.ns, nullptr);
        std::snprintf(dbuf, sizeof(dbuf), "%g", d);
        out << dbuf;
        for (int n : config.ns) {
            const PrfResult& prf = report.macro_prf.at(n);
            out << '\t' << format_score(prf.precision) << '\t' << format_score(prf.recall) << '\t'
                << format_score(prf.f);
        }
        out << '\t' << (report.macro_auc_ranking ? format_score(*report.macro_auc_ranking) : "-")
            << '\t' << (report.macro_auc_ke ? format_score(*report.macro_auc_ke) : "-") << '\n';
    }

    std::filesystem::create_directories(run.out_dir);
    write_file_atomic(run.out_dir / "sweep.tsv", out.str());
    write_manifest(config, run, "sweep-d");
}

void cmd_train_lda(const PipelineConfig& config, const RunOptions& run) {
    require_file(config.corpus, "paths.corpus");
    const Corpus corpus = load_corpus(config.corpus);
    const TopicModel model = train_lda(corpus, config.topics, config.effective_alpha(),
                                       config.beta, config.lda_iterations, config.seed);
    std::filesystem::create_directories(run.out_dir);
    save_topic_model(model, run.out_dir / "model.json");
    write_manifest(config, run, "train-lda");
}

void cmd_select_types(const PipelineConfig& config, const RunOptions& run) {
    require_file(config.lexicon, "paths.lexicon");
    const Lexicon lexicon = load_lexicon(config.lexicon);
    const std::vector<std::string> types = select_preferred_types(lexicon);
    std::string content;
    for (const std::string& label : types) {
        content += label;
        content.push_back('\n');
    }
    std::filesystem::create_directories(run.out_dir);
    write_file_atomic(run.out_dir / "preferred_types.txt", content);
    write_manifest(config, run, "select-types");
}

}  // namespace termrank
