#include "wordmap/cli.hpp"

#include <CLI11.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <optional>
#include <set>
#include <sstream>

#include "manifest.hpp"
#include "wordmap/alignment.hpp"
#include "wordmap/cbow.hpp"
#include "wordmap/corpus.hpp"
#include "wordmap/diagnostics.hpp"
#include "wordmap/embedding.hpp"
#include "wordmap/errors.hpp"
#include "wordmap/lexicon.hpp"
#include "wordmap/linear_map.hpp"
#include "wordmap/retrieval.hpp"
#include "wordmap/synth.hpp"

namespace wordmap::cli {
namespace {

namespace fs = std::filesystem;

std::ifstream open_in(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw DataError("cannot open " + path);
    return f;
}

template <class Fn>
void write_file(const fs::path& path, Fn&& fn) {
    if (path.has_parent_path()) fs::create_directories(path.parent_path());
    std::ofstream f(path, std::ios::binary);
    if (!f) throw EncodingError("cannot open " + path.string() + " for writing");
    fn(f);
    f.flush();
    if (!f) throw EncodingError("error writing " + path.string());
}

EmbeddingMatrix load_embedding(const std::string& path) {
    auto f = open_in(path);
    return read_embedding(f);
}

BilingualLexicon load_lexicon_file(const std::string& path) {
    auto f = open_in(path);
    return load_lexicon(f);
}

LinearMap load_map(const std::string& path) {
    auto f = open_in(path);
    return read_linear_map(f);
}

std::vector<Sentence> load_sentences(const std::string& path) {
    auto f = open_in(path);
    return read_sentences(f);
}

std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.6g", v);
    return buf;
}

// Resolved option values of a subcommand, in declaration order. Inputs are
// recorded by digest and outputs not at all, so both are skipped here.
void record_params(const CLI::App& sub, Manifest& m, const std::set<std::string>& skip) {
    for (const CLI::Option* opt : sub.get_options()) {
        const std::string name = opt->get_single_name();
        if (name == "help" || skip.count(name)) continue;
        std::string value;
        if (opt->get_expected_max() == 0) {
            value = opt->count() ? "true" : "false";
        } else if (opt->count()) {
            for (const auto& r : opt->results()) value += (value.empty() ? "" : ",") + r;
        } else {
            value = opt->get_default_str();
        }
        m.param(name, value);
    }
}

// --------------------------------------------------------------------------

struct CleanArgs {
    std::string input, output;
    bool keep_case = false, keep_punctuation = false, keep_duplicates = false;
};

void add_clean(CLI::App& app, CleanArgs& a) {
    auto* c = app.add_subcommand("clean", "Normalise a raw corpus into one tokenised sentence per line");
    c->add_option("--input", a.input, "Raw text, one sentence per line")->required();
    c->add_option("--output", a.output, "Cleaned corpus")->required();
    c->add_flag("--keep-case", a.keep_case, "Do not lowercase");
    c->add_flag("--keep-punctuation", a.keep_punctuation, "Do not strip punctuation");
    c->add_flag("--keep-duplicates", a.keep_duplicates, "Keep repeated sentences");
}

int run_clean(const CLI::App& sub, const CleanArgs& a, std::ostream& out, std::ostream& err) {
    Manifest m("clean");
    record_params(sub, m, {"input", "output"});
    m.input("input", a.input);

    CleaningRules rules;
    rules.lowercase = !a.keep_case;
    rules.strip_punctuation = !a.keep_punctuation;
    rules.drop_duplicates = !a.keep_duplicates;
    auto in = open_in(a.input);
    CorpusCleaner cleaner(rules);
    std::vector<Sentence> kept;
    std::string line;
    while (std::getline(in, line))
        if (auto s = cleaner.feed(line)) kept.push_back(std::move(*s));

    write_file(a.output, [&](std::ostream& f) { write_sentences(f, kept); });
    m.write_for(a.output);
    const auto st = corpus_stats(kept);
    out << "lines\t" << cleaner.lines_read() << "\nsentences\t" << st.n_sentences
        << "\nduplicates_dropped\t" << cleaner.duplicates_dropped() << '\n';
    (void)err;
    return kOk;
}

// --------------------------------------------------------------------------

struct StatsArgs {
    std::string corpus;
    bool clean = false;
};

void add_stats(CLI::App& app, StatsArgs& a) {
    auto* c = app.add_subcommand("stats", "Sentence, token and vocabulary counts of a corpus");
    c->add_option("--corpus", a.corpus, "Corpus file")->required();
    c->add_flag("--clean", a.clean, "Apply the default cleaning rules first (raw input)");
}

int run_stats(const StatsArgs& a, std::ostream& out) {
    auto in = open_in(a.corpus);
    const auto sentences = a.clean ? clean_corpus(in) : read_sentences(in);
    const auto st = corpus_stats(sentences);
    out << "sentences\t" << st.n_sentences << "\ntokens\t" << st.n_tokens << "\nunique_words\t"
        << st.n_unique_words << '\n';
    return kOk;
}

// --------------------------------------------------------------------------

struct TrainArgs {
    std::string corpus, output, init;
    CbowConfig cfg;
};

void add_train(CLI::App& app, TrainArgs& a) {
    auto* c = app.add_subcommand("train-embed", "Train CBOW embeddings, optionally warm-started");
    c->add_option("--corpus", a.corpus, "Cleaned corpus")->required();
    c->add_option("--output", a.output, "Embedding file to write")->required();
    c->add_option("--init", a.init, "Pretrained embedding for the warm start");
    c->add_option("--dim", a.cfg.dim);
    c->add_option("--epochs", a.cfg.epochs);
    c->add_option("--negatives", a.cfg.negatives);
    c->add_option("--window", a.cfg.window);
    c->add_option("--batch-size", a.cfg.batch_size, "Tokens per job");
    c->add_option("--lr", a.cfg.learning_rate);
    c->add_option("--min-count", a.cfg.min_count);
    c->add_option("--sample", a.cfg.sample, "Subsampling threshold, 0 disables");
    c->add_flag("--freeze-init", a.cfg.freeze_pretrained, "Keep warm-started rows fixed");
    c->add_option("--seed", a.cfg.seed);
    c->add_option("--threads", a.cfg.threads);
}

int run_train(const CLI::App& sub, const TrainArgs& a, std::ostream& out, std::ostream& err) {
    Manifest m("train-embed");
    record_params(sub, m, {"corpus", "output", "init"});
    m.input("corpus", a.corpus);
    if (!a.init.empty()) m.input("init", a.init);
    validate(a.cfg);

    const auto corpus = load_sentences(a.corpus);
    std::optional<WarmStart> ws;
    if (!a.init.empty()) {
        const auto pretrained = load_embedding(a.init);
        const auto vocab = build_vocabulary(corpus, a.cfg.min_count);
        ws = init_from_pretrained(pretrained, vocab, a.cfg.dim, a.cfg.seed);
        err << "warm start coverage " << fmt(ws->coverage) << '\n';
    }
    const auto result = train_cbow(corpus, a.cfg, ws ? &*ws : nullptr);
    write_file(a.output, [&](std::ostream& f) { write_embedding(f, result.embedding); });
    m.write_for(a.output);

    out << "vocab\t" << result.embedding.size() << '\n';
    for (std::size_t e = 0; e < result.monitor_loss.size(); ++e)
        out << "epoch " << e << " loss " << fmt(result.monitor_loss[e]) << '\n';
    return kOk;
}

// --------------------------------------------------------------------------

struct AlignArgs {
    std::string src, tgt, lexicon, output, init;
    std::string method = "procrustes";
    std::string normalize = "unit";
    std::size_t refine = 0;
    std::size_t criterion_k = 10;
    std::size_t max_rank = 15000;
    AdversarialConfig adv;
    RcslsConfig rcsls;
    std::uint64_t seed = 1;
};

void add_align(CLI::App& app, AlignArgs& a) {
    auto* c = app.add_subcommand("align", "Learn a source-to-target linear map");
    c->add_option("--src", a.src, "Source embedding")->required();
    c->add_option("--tgt", a.tgt, "Target embedding")->required();
    c->add_option("--output", a.output, "Map file to write")->required();
    c->add_option("--method", a.method)->check(CLI::IsMember({"procrustes", "adversarial", "rcsls"}));
    c->add_option("--lexicon", a.lexicon, "Training lexicon (procrustes, rcsls)");
    c->add_option("--init", a.init, "Starting map (adversarial, rcsls)");
    c->add_option("--refine", a.refine, "Iterative refinement steps after the method");
    c->add_option("--normalize", a.normalize)->check(CLI::IsMember({"none", "unit", "center_unit"}));
    c->add_option("--csls-k", a.criterion_k, "Neighbourhood size for induced pairs and model selection");
    c->add_option("--max-rank", a.max_rank, "Rows considered when inducing pairs");
    c->add_option("--seed", a.seed);

    c->add_option("--disc-hidden", a.adv.disc_hidden);
    c->add_option("--disc-layers", a.adv.disc_layers);
    c->add_option("--disc-dropout", a.adv.disc_dropout, "Input dropout");
    c->add_option("--smoothing", a.adv.smoothing);
    c->add_option("--map-lr", a.adv.map_lr);
    c->add_option("--disc-lr", a.adv.disc_lr);
    c->add_option("--epochs", a.adv.epochs);
    c->add_option("--epoch-size", a.adv.epoch_size);
    c->add_option("--batch-size", a.adv.batch_size);
    c->add_option("--disc-steps", a.adv.disc_steps);
    c->add_option("--ortho-beta", a.adv.ortho_beta);
    c->add_option("--vocab-cap", a.adv.vocab_cap);
    c->add_option("--lr-decay", a.adv.lr_decay);
    c->add_option("--lr-shrink", a.adv.lr_shrink);

    c->add_option("--rcsls-lr", a.rcsls.lr);
    c->add_option("--rcsls-epochs", a.rcsls.epochs);
    c->add_option("--rcsls-refresh", a.rcsls.neighborhood_refresh, "Epochs between neighbourhood updates");
    c->add_flag("--no-spectral", "Skip the spectral-ball projection");
}

int run_align(const CLI::App& sub, AlignArgs a, std::ostream& out, std::ostream& err) {
    Manifest m("align");
    record_params(sub, m, {"src", "tgt", "lexicon", "output", "init"});
    m.input("src", a.src);
    m.input("tgt", a.tgt);
    if (!a.lexicon.empty()) m.input("lexicon", a.lexicon);
    if (!a.init.empty()) m.input("init", a.init);

    const bool supervised = a.method != "adversarial";
    if (supervised && a.lexicon.empty())
        throw ArgumentError("--lexicon is required for --method " + a.method);
    if (!supervised && !a.lexicon.empty()) err << "warning: --lexicon is ignored by adversarial\n";

    const auto scheme = parse_norm_scheme(a.normalize);
    const auto src = normalize(load_embedding(a.src), scheme);
    const auto tgt = normalize(load_embedding(a.tgt), scheme);
    std::optional<LinearMap> init;
    if (!a.init.empty()) init = load_map(a.init);

    LinearMap map;
    if (a.method == "procrustes") {
        if (init) err << "warning: --init is ignored by procrustes\n";
        map = procrustes(src, tgt, load_lexicon_file(a.lexicon));
    } else if (a.method == "adversarial") {
        a.adv.criterion_k = a.criterion_k;
        a.adv.criterion_max_rank = a.max_rank;
        a.adv.seed = a.seed;
        AdversarialTrace trace;
        map = adversarial_align(src, tgt, a.adv, init, &trace);
        for (std::size_t e = 0; e < trace.epochs.size(); ++e) {
            const auto& s = trace.epochs[e];
            out << "epoch " << e + 1 << " disc_loss " << fmt(s.disc_loss) << " map_loss "
                << fmt(s.map_loss) << " disc_accuracy " << fmt(s.disc_accuracy) << " criterion "
                << fmt(s.criterion) << '\n';
        }
        out << "best_epoch " << trace.best_epoch + 1 << '\n';
    } else {
        a.rcsls.k = a.criterion_k;
        a.rcsls.seed = a.seed;
        a.rcsls.spectral = sub.get_option("--no-spectral")->count() == 0;
        RcslsTrace trace;
        map = rcsls_align(src, tgt, load_lexicon_file(a.lexicon), a.rcsls, init, &trace);
        for (std::size_t e = 0; e < trace.objective.size(); ++e)
            out << "epoch " << e << " objective " << fmt(trace.objective[e]) << '\n';
        out << "best_epoch " << trace.best_epoch << '\n';
    }

    if (a.refine > 0) {
        RefineTrace trace;
        map = refine(src, tgt, map, a.refine, a.criterion_k, a.max_rank, &trace);
        for (std::size_t i = 0; i < trace.steps.size(); ++i)
            out << "refine " << i << " pairs " << trace.steps[i].pairs << " criterion "
                << fmt(trace.steps[i].criterion) << '\n';
        out << "refine_best " << trace.best_step << '\n';
    }

    write_file(a.output, [&](std::ostream& f) { write_linear_map(f, map); });
    m.write_for(a.output);
    out << "method " << a.method << "\northogonality_error " << fmt(map.orthogonality_error()) << '\n';
    return kOk;
}

// --------------------------------------------------------------------------

struct EvalArgs {
    std::string map, src, tgt, lexicon;
    std::string method = "both";
    std::string normalize = "unit";
    std::size_t k = 10;
    bool per_query = false;
    std::size_t baseline_trials = 0;
    std::uint64_t seed = 1;
    unsigned threads = 1;
};

void add_eval(CLI::App& app, EvalArgs& a) {
    auto* c = app.add_subcommand("eval", "Precision at k of a map on a test lexicon");
    c->add_option("--map", a.map)->required();
    c->add_option("--src", a.src)->required();
    c->add_option("--tgt", a.tgt)->required();
    c->add_option("--lexicon", a.lexicon, "Test lexicon")->required();
    c->add_option("--method", a.method)->check(CLI::IsMember({"nn", "csls", "both"}));
    c->add_option("--k", a.k, "CSLS neighbourhood size");
    c->add_option("--normalize", a.normalize)->check(CLI::IsMember({"none", "unit", "center_unit"}));
    c->add_flag("--per-query", a.per_query, "One line per query after the summary");
    c->add_option("--baseline-trials", a.baseline_trials, "Monte-Carlo trials for the random baseline");
    c->add_option("--seed", a.seed, "Random baseline seed");
    c->add_option("--threads", a.threads);
}

int run_eval(const EvalArgs& a, std::ostream& out) {
    const auto map = load_map(a.map);
    const auto scheme = parse_norm_scheme(a.normalize);
    const auto src = normalize(load_embedding(a.src), scheme);
    const auto tgt = normalize(load_embedding(a.tgt), scheme);
    const auto lex = load_lexicon_file(a.lexicon);
    if (a.threads < 1) throw ArgumentError("--threads must be >= 1");

    std::vector<RetrievalMethod> methods;
    if (a.method == "both") methods = {RetrievalMethod::nn, RetrievalMethod::csls};
    else methods = {parse_retrieval_method(a.method)};

    EvaluateOptions opts;
    opts.csls_k = a.k;
    opts.threads = a.threads;
    for (auto method : methods) {
        const auto report = evaluate(map, lex, src, tgt, method, opts);
        out << format_summary(report);
        if (methods.size() > 1) out << " method " << to_string(method);
        out << '\n';
        if (a.per_query) write_per_query(out, report);
    }
    if (a.baseline_trials > 0) {
        const auto b = random_baseline(lex, a.baseline_trials, a.seed);
        out << "random P@1 analytic " << fmt(b.analytic) << " monte_carlo " << fmt(b.monte_carlo)
            << '\n';
    }
    return kOk;
}

// --------------------------------------------------------------------------

struct TranslateArgs {
    std::string map, src, tgt;
    std::vector<std::string> words;
    std::string method = "csls";
    std::string normalize = "unit";
    std::size_t k = 10;
    std::size_t top = 5;
};

void add_translate(CLI::App& app, TranslateArgs& a) {
    auto* c = app.add_subcommand("translate", "Ranked target candidates for source words");
    c->add_option("--map", a.map)->required();
    c->add_option("--src", a.src)->required();
    c->add_option("--tgt", a.tgt)->required();
    c->add_option("--word", a.words, "Source word; repeatable")->required();
    c->add_option("--method", a.method)->check(CLI::IsMember({"nn", "csls"}));
    c->add_option("--k", a.k, "CSLS neighbourhood size");
    c->add_option("--top", a.top, "Candidates per word");
    c->add_option("--normalize", a.normalize)->check(CLI::IsMember({"none", "unit", "center_unit"}));
}

int run_translate(const TranslateArgs& a, std::ostream& out) {
    const auto map = load_map(a.map);
    const auto scheme = parse_norm_scheme(a.normalize);
    const auto src = normalize(load_embedding(a.src), scheme);
    const auto tgt = normalize(load_embedding(a.tgt), scheme);
    const auto method = parse_retrieval_method(a.method);
    for (const auto& w : a.words)
        for (const auto& c : retrieve(w, map, src, tgt, method, a.k, a.top))
            out << w << '\t' << c.word << '\t' << fmt(c.score) << '\n';
    return kOk;
}

// --------------------------------------------------------------------------

struct SynthArgs {
    std::size_t n = 2000, d = 50;
    double noise = 0.0;
    std::uint64_t seed = 1;
    std::string shape = "isotropic";
    std::string out;
    std::size_t train = 500, test = 500;
};

void add_synth(CLI::App& app, SynthArgs& a) {
    auto* c = app.add_subcommand("synth", "Synthetic embedding pair with a known orthogonal map");
    c->add_option("--n", a.n, "Words per side");
    c->add_option("--d", a.d, "Dimension");
    c->add_option("--noise", a.noise, "Target noise standard deviation");
    c->add_option("--seed", a.seed);
    c->add_option("--shape", a.shape)->check(CLI::IsMember({"isotropic", "anisotropic"}));
    c->add_option("--out", a.out, "Output directory")->required();
    c->add_option("--train", a.train, "Pairs in train.txt");
    c->add_option("--test", a.test, "Pairs in test.txt");
}

int run_synth(const CLI::App& sub, const SynthArgs& a, std::ostream& out) {
    Manifest m("synth");
    record_params(sub, m, {"out"});
    const auto inst = generate(a.n, a.d, a.noise, a.seed, parse_cloud_shape(a.shape));
    const auto split = holdout_split(inst.lexicon, a.train, a.test, a.seed);

    const fs::path dir(a.out);
    write_instance(dir, inst);
    write_file(dir / "train.txt", [&](std::ostream& f) { write_lexicon(f, split.train); });
    write_file(dir / "test.txt", [&](std::ostream& f) { write_lexicon(f, split.test); });
    for (const char* name : {"src.vec", "tgt.vec", "lexicon.txt", "truth.map", "train.txt", "test.txt"})
        m.write_for(dir / name);
    out << "src\t" << (dir / "src.vec").string() << "\ntgt\t" << (dir / "tgt.vec").string()
        << "\ntrain\t" << (dir / "train.txt").string() << "\ntest\t" << (dir / "test.txt").string()
        << "\ntruth\t" << (dir / "truth.map").string() << '\n';
    return kOk;
}

// Routes library warnings to the caller's error stream for one run.
class WarningScope {
public:
    explicit WarningScope(std::ostream& err) {
        set_warning_handler([&err](std::string_view msg) { err << "warning: " << msg << '\n'; });
    }
    ~WarningScope() {
        set_warning_handler([](std::string_view msg) {
            std::fprintf(stderr, "warning: %.*s\n", static_cast<int>(msg.size()), msg.data());
        });
    }
    WarningScope(const WarningScope&) = delete;
    WarningScope& operator=(const WarningScope&) = delete;
};

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app("Cross-lingual word embedding alignment", "wordmap");
    app.option_defaults()->always_capture_default();
    app.require_subcommand(1, 1);
    app.set_version_flag("--version", WORDMAP_VERSION);

    CleanArgs clean;
    StatsArgs stats;
    TrainArgs train;
    AlignArgs align;
    EvalArgs eval;
    TranslateArgs translate;
    SynthArgs synth;
    add_clean(app, clean);
    add_stats(app, stats);
    add_train(app, train);
    add_align(app, align);
    add_eval(app, eval);
    add_translate(app, translate);
    add_synth(app, synth);

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kOk : kUsage;
    }

    WarningScope warnings(err);
    try {
        const auto* sub = app.get_subcommands().front();
        const std::string name = sub->get_name();
        if (name == "clean") return run_clean(*sub, clean, out, err);
        if (name == "stats") return run_stats(stats, out);
        if (name == "train-embed") return run_train(*sub, train, out, err);
        if (name == "align") return run_align(*sub, align, out, err);
        if (name == "eval") return run_eval(eval, out);
        if (name == "translate") return run_translate(translate, out);
        if (name == "synth") return run_synth(*sub, synth, out);
        return kUsage;
    } catch (const ArgumentError& e) {
        err << "error: " << e.what() << '\n';
        return kUsage;
    } catch (const DivergenceError& e) {
        err << "error: " << e.what() << '\n';
        return kNumerical;
    } catch (const DataError& e) {
        err << "error: " << e.what() << '\n';
        return kData;
    } catch (const fs::filesystem_error& e) {
        err << "error: " << e.what() << '\n';
        return kData;
    }
}

}  // namespace wordmap::cli
