#include "cubefix/builder.hpp"
#include "cubefix/error.hpp"
#include "cubefix/io.hpp"
#include "cubefix/partition.hpp"
#include "cubefix/pipeline.hpp"
#include "cubefix/random_groups.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <optional>

using namespace cubefix;
using nlohmann::ordered_json;

namespace {

struct ActionArgs {
    std::string action_path;
    std::string complex;
    int rank = 2;
    int radius = 10;
    std::string dims;

    void add(CLI::App* app) {
        app->add_option("--action", action_path, "action JSON file");
        app->add_option("--complex", complex, "built-in window: tree or grid")->check(CLI::IsMember({"tree", "grid"}));
        app->add_option("--rank", rank, "free group rank for --complex tree");
        app->add_option("--radius", radius, "ball radius for --complex tree");
        app->add_option("--dims", dims, "comma-separated box radii for --complex grid");
    }

    PipelineConfig config() const {
        PipelineConfig c;
        if (!action_path.empty()) {
            c.complex = "file";
            c.action_path = action_path;
        } else if (!complex.empty()) {
            c.complex = complex;
        } else {
            fail(ErrorKind::Format, "give --action or --complex");
        }
        c.rank = rank;
        c.radius = radius;
        c.dims = parse_ints(dims);
        return c;
    }

    static std::vector<int> parse_ints(const std::string& text) {
        std::vector<int> out;
        std::stringstream ss(text);
        std::string item;
        while (std::getline(ss, item, ',')) {
            try {
                out.push_back(std::stoi(item));
            } catch (const std::exception&) {
                fail(ErrorKind::Format, "not an integer list: " + text);
            }
        }
        return out;
    }
};

Rational rational_arg(const std::string& text) {
    try {
        return parse_rational(text);
    } catch (const std::exception& e) {
        fail(ErrorKind::Format, "bad rational '" + text + "'");
    }
}

std::uint64_t seed_arg(const std::optional<std::uint64_t>& seed) {
    if (seed) return *seed;
    if (const char* env = std::getenv("CUBEFIX_SEED")) {
        try {
            return std::stoull(env);
        } catch (const std::exception&) {
            fail(ErrorKind::Format, "CUBEFIX_SEED is not an integer");
        }
    }
    fail(ErrorKind::Format, "a seed is required (--seed or CUBEFIX_SEED)");
}

std::string out_path;

void emit(const std::string& text) {
    if (out_path.empty()) std::cout << text;
    else write_file(out_path, text);
}

int vertex_arg(const MedianGraph& g, const std::string& id) {
    try {
        return g.index_of(id);
    } catch (const Error&) {
        fail(ErrorKind::Format, "unknown vertex " + id);
    }
}

// "u--v"
int hyperplane_arg(const MedianGraph& g, const std::string& text) {
    auto pos = text.find("--");
    if (pos == std::string::npos) fail(ErrorKind::Format, "hyperplane edges are written u--v");
    int e = g.edge_id(vertex_arg(g, text.substr(0, pos)), vertex_arg(g, text.substr(pos + 2)));
    if (e < 0) fail(ErrorKind::Format, "not an edge: " + text);
    return g.class_of_edge(e);
}

std::vector<std::string> names(const std::vector<Letter>& ls) {
    std::vector<std::string> out;
    for (Letter l : ls) out.push_back(letter_name(l));
    return out;
}

Word word_arg(const std::string& text) {
    try {
        return parse_word(text);
    } catch (const Error& e) {
        fail(ErrorKind::Format, e.what());
    }
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"cubefix: progressing automata for group actions on median graphs"};
    app.require_subcommand(1);
    app.add_option("--out", out_path, "write the report to a file instead of stdout");

    std::string file, eps0 = "1/100", eps1 = "3/4", c1 = "1/3", d, lambda, descent, lengths = "10,20,40", model = "plain";
    std::string basepoint, word = "1", hyperplane, automaton_path, relators_path, base_path, pool_path, graph_path;
    int n = 1, k = 2, L = 20, p = 6, trials = 200, max_len = -1, lemma_len = 8, no_backtrack = 0;
    bool without_replacement = false, cyclic_reduce = false, verify = false;
    std::optional<std::uint64_t> seed;
    std::string format = "json";
    ActionArgs action_args;

    auto* validate = app.add_subcommand("validate", "check that a graph file is a median graph");
    validate->add_option("file", file, "graph JSON")->required();

    auto* part = app.add_subcommand("partition", "A/B/P partition of the letters at a hyperplane");
    action_args.add(part);
    part->add_option("--basepoint", basepoint, "basepoint vertex id");
    part->add_option("--word", word, "prefix word w (1 for empty)");
    part->add_option("--hyperplane", hyperplane, "hyperplane given by an edge u--v")->required();

    auto* build = app.add_subcommand("build", "build a progressing automaton");
    action_args.add(build);
    build->add_option("--basepoint", basepoint, "basepoint vertex id (default: minimizer or window basepoint)");
    build->add_option("--dim", n, "dimension bound n");
    build->add_option("--eps1", eps1, "epsilon_1");
    build->add_option("--descent-lambda", descent, "descend whenever |P(H)| >= lambda |S|");

    auto* ver = app.add_subcommand("verify", "verify that an automaton is progressing");
    action_args.add(ver);
    ver->add_option("--automaton", automaton_path, "automaton JSON")->required();
    ver->add_option("--basepoint", basepoint, "basepoint vertex id");
    ver->add_option("--max-len", max_len, "longest path checked (default |V| + 1)");

    auto* dt = app.add_subcommand("dtable", "print the D table");
    dt->add_option("--eps0", eps0, "epsilon_0");
    dt->add_option("--n", n, "rows");

    auto* smp = app.add_subcommand("sample", "sample relators from the density model");
    smp->add_option("--k", k, "generators");
    smp->add_option("--d", d, "density")->required();
    smp->add_option("--L", L, "relator length");
    smp->add_option("--model", model, "plain or reduced")->check(CLI::IsMember({"plain", "reduced"}));
    smp->add_option("--seed", seed, "seed");
    smp->add_flag("--without-replacement", without_replacement, "draw distinct relators");
    smp->add_option("--format", format, "json or text")->check(CLI::IsMember({"json", "text"}));

    auto* exp = app.add_subcommand("experiment", "Monte Carlo intersection of random relators with a language");
    exp->add_option("--automaton", automaton_path, "automaton JSON")->required();
    exp->add_option("--d", d, "density")->required();
    exp->add_option("--lengths", lengths, "comma-separated relator lengths");
    exp->add_option("--trials", trials, "trials per length");
    exp->add_option("--seed", seed, "seed");
    exp->add_option("--model", model, "plain or reduced")->check(CLI::IsMember({"plain", "reduced"}));

    auto* sc = app.add_subcommand("smallcanc", "check C'(1/p)");
    sc->add_option("--relators", relators_path, "relator file")->required();
    sc->add_option("--p", p, "p");
    sc->add_flag("--cyclic-reduce", cyclic_reduce, "cyclically reduce relators first");

    auto* rips = app.add_subcommand("rips", "assemble a Rips-style presentation");
    rips->add_option("--base", base_path, "base presentation")->required();
    rips->add_option("--pool", pool_path, "pool relator file")->required();
    rips->add_option("--n", n, "dimension");
    rips->add_option("--p", p, "p");
    rips->add_option("--seed", seed, "seed");
    rips->add_flag("--verify", verify, "check C'(1/p) on the output");

    auto* pipe = app.add_subcommand("pipeline", "window -> basepoint -> build -> verify");
    action_args.add(pipe);
    pipe->add_option("--dim", n, "dimension bound n");
    pipe->add_option("--c1", c1, "fix-set threshold c1");
    pipe->add_option("--eps1", eps1, "epsilon_1");
    pipe->add_option("--lambda", lambda, "growth to certify");
    pipe->add_option("--descent-lambda", descent, "descend whenever |P(H)| >= lambda |S|");
    pipe->add_option("--max-len", max_len, "longest path checked (default |V| + 1)");
    pipe->add_option("--lemma-len", lemma_len, "word length for the checkpoint lemma");
    pipe->add_option("--d", d, "run the intersection experiment at this density");
    pipe->add_option("--lengths", lengths, "experiment lengths");
    pipe->add_option("--trials", trials, "experiment trials");
    pipe->add_option("--seed", seed, "experiment seed");
    pipe->add_option("--automaton-out", automaton_path, "also write the automaton JSON here");

    auto* exp_dot = app.add_subcommand("export", "DOT export");
    exp_dot->add_option("--graph", graph_path, "graph JSON");
    exp_dot->add_option("--automaton", automaton_path, "automaton JSON");
    exp_dot->add_option("--no-backtrack", no_backtrack, "export the no-backtrack automaton of rank k");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (*validate) {
            RawGraph raw = parse_graph_json(read_file(file));
            ordered_json j;
            try {
                MedianGraph g = MedianGraph::validate(raw);
                j = {{"median", true}, {"vertices", g.vertex_count()}, {"edges", g.edge_count()},
                     {"hyperplanes", g.class_count()}, {"dimension", dimension(g)}};
                emit(j.dump(2) + "\n");
                return 0;
            } catch (const Error& e) {
                j = {{"median", false}, {"error", e.what()}, {"witness", e.witness}};
                emit(j.dump(2) + "\n");
                return 1;
            }
        }
        if (*part) {
            Action act = load_action(action_args.config());
            const MedianGraph& g = act.graph();
            int x = basepoint.empty() ? act.basepoint() : vertex_arg(g, basepoint);
            PartitionResult r = partition(act, x, word_arg(word), hyperplane_arg(g, hyperplane));
            ordered_json j = {{"basepoint", g.name(x)}, {"word", format_word(r.w)}, {"H", r.H},
                              {"A", names(r.A)}, {"B", names(r.B)}, {"P_vis", names(r.P_vis)},
                              {"P_cross", names(r.P_cross)}, {"P_disj", names(r.P_disj)},
                              {"equal_not_visible", names(r.equal_not_visible)}};
            emit(j.dump(2) + "\n");
            return 0;
        }
        if (*build) {
            Action act = load_action(action_args.config());
            const MedianGraph& g = act.graph();
            int x = !basepoint.empty() ? vertex_arg(g, basepoint)
                                       : act.is_window() ? act.basepoint() : minimize_displacement(act).vertex;
            BuildOptions opts;
            if (!descent.empty()) opts.descent_lambda = rational_arg(descent);
            BuildResult b = build_automaton(act, x, n, rational_arg(eps1), opts);
            ordered_json j;
            j["automaton"] = ordered_json::parse(automaton_to_json(b.automaton, &g));
            j["trace"] = ordered_json::parse(trace_to_json(b.trace));
            emit(j.dump(2) + "\n");
            return b.trace.flags.empty() ? 0 : 1;
        }
        if (*ver) {
            Action act = load_action(action_args.config());
            const MedianGraph& g = act.graph();
            int x = !basepoint.empty() ? vertex_arg(g, basepoint)
                                       : act.is_window() ? act.basepoint() : minimize_displacement(act).vertex;
            Automaton a = parse_automaton_json(read_file(automaton_path), &g);
            ProgressReport r = verify_progressing(a, act, x, max_len);
            ordered_json j = {{"ok", r.ok}, {"max_len", r.max_len}, {"paths_checked", r.paths_checked},
                              {"checkpoint_free_cycle", r.checkpoint_free_cycle}};
            if (r.violation) {
                std::vector<std::string> path;
                for (int v : r.violation->path) path.push_back(a.vertices[static_cast<size_t>(v)]);
                j["violation"] = {{"clause", r.violation->clause}, {"path", path},
                                  {"word", format_word(a.spell(r.violation->word))}, {"reason", r.violation->reason}};
            }
            emit(j.dump(2) + "\n");
            return r.ok ? 0 : 1;
        }
        if (*dt) {
            DTable t = d_table(rational_arg(eps0), n);
            ordered_json rows = ordered_json::array();
            for (int i = 1; i <= n; ++i) {
                std::vector<std::string> row;
                for (int j = 0; j < i; ++j) row.push_back(to_string(t.at(i, j)));
                rows.push_back(row);
            }
            ordered_json viol = ordered_json::array();
            for (const auto& v : monotonicity_violations(t)) viol.push_back({{"i", v.i}, {"j", v.j}, {"i2", v.i2}, {"j2", v.j2}});
            ordered_json j = {{"epsilon0", to_string(t.epsilon0)}, {"n", n}, {"D", rows},
                              {"rows_and_columns_monotone", rows_and_columns_monotone(t)}, {"monotonicity_violations", viol}};
            emit(j.dump(2) + "\n");
            return 0;
        }
        if (*smp) {
            std::uint64_t s = seed_arg(seed);
            Rational dd = rational_arg(d);
            RelatorSet r = model == "plain" ? sample_plain(k, dd, L, s, !without_replacement)
                                            : sample_reduced(k, dd, L, s, !without_replacement);
            if (format == "text") {
                emit(relators_to_text(r.relators));
                return 0;
            }
            std::vector<std::string> rels;
            for (const Word& w : r.relators) rels.push_back(format_word(w));
            ordered_json j = {{"k", r.k}, {"d", to_string(r.d)}, {"L", r.L}, {"model", model_name(r.model)},
                              {"seed", r.seed}, {"with_replacement", r.with_replacement},
                              {"count", r.relators.size()}, {"relators", rels}};
            emit(j.dump(2) + "\n");
            return 0;
        }
        if (*exp) {
            std::uint64_t s = seed_arg(seed);
            Automaton a = parse_automaton_json(read_file(automaton_path));
            auto pts = intersection_experiment(a, a.alphabet.k, rational_arg(d), ActionArgs::parse_ints(lengths), trials, s,
                                               model == "plain" ? Model::Plain : Model::Reduced);
            ordered_json arr = ordered_json::array();
            for (const auto& pt : pts)
                arr.push_back({{"L", pt.L}, {"trials", pt.trials}, {"hits", pt.hits}, {"p", pt.p},
                               {"wilson", {pt.ci.lo, pt.ci.hi}}});
            ordered_json j = {{"d", d}, {"seed", s}, {"model", model}, {"points", arr}};
            emit(j.dump(2) + "\n");
            return 0;
        }
        if (*sc) {
            SmallCancellationReport r = small_cancellation_check(parse_relators(read_file(relators_path)), p, cyclic_reduce);
            ordered_json j = {{"p", r.p}, {"holds", r.holds}, {"relators", r.relators}};
            if (r.worst)
                j["worst_piece"] = {{"piece", format_word(r.worst->word)}, {"length", r.worst->word.size()},
                                    {"relator", r.worst->relator}, {"relator_length", r.worst->length}};
            emit(j.dump(2) + "\n");
            return r.holds ? 0 : 1;
        }
        if (*rips) {
            Presentation base = parse_presentation(read_file(base_path));
            std::vector<Word> pool_words = parse_relators(read_file(pool_path));
            RelatorSet pool;
            pool.model = Model::Reduced;
            pool.relators = pool_words;
            pool.L = pool_words.empty() ? 0 : static_cast<int>(pool_words.front().size());
            for (const Word& w : pool_words)
                for (Letter l : w) pool.k = std::max(pool.k, generator_of(l) + 1);
            RipsOptions opts;
            opts.seed = seed_arg(seed);
            opts.verify = verify;
            RipsResult r = rips_assemble(base, n, p, pool, opts);
            ordered_json j = ordered_json::parse(presentation_to_json(r.presentation));
            j["kept"] = r.kept;
            j["k_of_n"] = k_of_n(n);
            if (r.check) j["small_cancellation"] = r.check->holds;
            emit(j.dump(2) + "\n");
            return r.check && !r.check->holds ? 1 : 0;
        }
        if (*pipe) {
            PipelineConfig cfg = action_args.config();
            cfg.n = n;
            cfg.c1 = rational_arg(c1);
            cfg.epsilon1 = rational_arg(eps1);
            if (!lambda.empty()) cfg.lambda = rational_arg(lambda);
            if (!descent.empty()) cfg.descent_lambda = rational_arg(descent);
            cfg.max_len = max_len;
            cfg.lemma_len = lemma_len;
            if (!d.empty()) {
                cfg.d = rational_arg(d);
                cfg.lengths = ActionArgs::parse_ints(lengths);
                cfg.trials = trials;
                cfg.seed = seed_arg(seed);
            }
            PipelineReport r = run_pipeline(cfg);
            emit(pipeline_report_json(r));
            if (!automaton_path.empty() && !r.branch.empty())
                write_file(automaton_path, automaton_to_json(r.automaton, &r.action->graph()));
            if (const Check* f = r.first_failure()) {
                std::cerr << "failed: " << f->name << ": " << f->detail << "\n";
                return 1;
            }
            return 0;
        }
        if (*exp_dot) {
            if (!graph_path.empty()) {
                emit(graph_to_dot(MedianGraph::validate(parse_graph_json(read_file(graph_path)))));
            } else if (!automaton_path.empty()) {
                emit(automaton_to_dot(parse_automaton_json(read_file(automaton_path))));
            } else if (no_backtrack > 0) {
                emit(automaton_to_dot(no_backtrack_automaton(no_backtrack)));
            } else {
                fail(ErrorKind::Format, "give --graph, --automaton or --no-backtrack");
            }
            return 0;
        }
    } catch (const Error& e) {
        std::cerr << e.what() << "\n";
        return e.kind() == ErrorKind::Format ? 2 : 1;
    } catch (const std::exception& e) {
        std::cerr << e.what() << "\n";
        return 1;
    }
    return 0;
}
