#include "cubefix/pipeline.hpp"

#include "cubefix/error.hpp"
#include "cubefix/io.hpp"

#include <json.hpp>

#include <filesystem>

namespace cubefix {

bool PipelineReport::ok() const { return first_failure() == nullptr; }

const Check* PipelineReport::first_failure() const {
    for (const Check& c : checks)
        if (!c.ok) return &c;
    return nullptr;
}

Action load_action(const PipelineConfig& cfg) {
    if (cfg.complex == "tree") return tree_ball_action(cfg.rank, cfg.radius);
    if (cfg.complex == "grid") return grid_box_action(cfg.dims);
    if (cfg.complex == "file") {
        std::filesystem::path p(cfg.action_path);
        return parse_action_json(read_file(cfg.action_path), p.has_parent_path() ? p.parent_path().string() : ".");
    }
    fail(ErrorKind::Format, "unknown complex " + cfg.complex);
}

namespace {

std::string letters_text(const std::vector<Letter>& ls) {
    std::string out;
    for (Letter l : ls) out += (out.empty() ? "" : " ") + letter_name(l);
    return out;
}

// Every accepted word of length 1..L moves x.
Check moves_basepoint(const Automaton& a, const Action& act, int x, int L) {
    Check c{"words move the basepoint", true, ""};
    for_each_accepted(a, L, [&](const SymbolWord& w) {
        if (!c.ok || w.empty()) return;
        if (act.try_apply(a.spell(w), x) == x) {
            c.ok = false;
            c.detail = format_word(a.spell(w));
        }
    });
    if (c.ok) c.detail = "all accepted words up to length " + std::to_string(L);
    return c;
}

}  // namespace

PipelineReport run_pipeline(const PipelineConfig& cfg) { return run_pipeline(cfg, load_action(cfg)); }

PipelineReport run_pipeline(const PipelineConfig& cfg, Action act) {
    PipelineReport r;
    if (act.is_window()) {
        r.x = act.basepoint();
    } else {
        if (detect_inversions(act)) {
            act = subdivide_action(act).action;
            r.subdivided = true;
        }
        r.x = minimize_displacement(act).vertex;
    }
    r.action = act;
    r.displacement = displacement(act, r.x);
    const int S = act.letter_count();
    const int x = r.x;
    r.fix = fix_set(act, x);

    BuildConstants bc = build_constants(cfg.n, cfg.epsilon1);
    r.c2 = bc.theta();
    r.lambda = cfg.lambda ? *cfg.lambda
                          : std::min(Rational(1, 3), Rational(Rational(2, 3) * build_constants(cfg.n, Rational(3, 4)).theta()));

    if (static_cast<int>(r.fix.size()) == S) {
        r.checks.push_back({"moving generator", false, "every generator fixes the basepoint"});
        return r;
    }
    if (at_least_fraction(static_cast<long long>(r.fix.size()), cfg.c1, S)) {
        r.branch = "fixset";
        r.automaton = fixset_automaton(act, x);
    } else {
        r.branch = "builder";
        BuildOptions opts;
        opts.descent_lambda = cfg.descent_lambda;
        try {
            r.build = build_automaton(act, x, cfg.n, cfg.epsilon1, opts);
        } catch (const Error& e) {
            r.checks.push_back({"build", false, e.what()});
            return r;
        }
        r.automaton = r.build->automaton;
        r.checks.push_back({"build", r.build->trace.flags.empty(),
                            r.build->trace.flags.empty() ? "all trees verified" : r.build->trace.flags.front()});
        for (const DescentCertificate& d : r.build->trace.descents) {
            const std::string lvl = "descent at level " + std::to_string(d.level);
            r.checks.push_back({lvl + ": subset size", d.size_ok, letters_text(d.subset)});
            r.checks.push_back({lvl + ": crossing drop", d.crossing_after < d.crossing_before,
                                std::to_string(d.crossing_before) + " -> " + std::to_string(d.crossing_after)});
        }
    }

    r.progress = verify_progressing(r.automaton, act, x, cfg.max_len);
    r.checks.push_back({"progressing", r.progress->ok,
                        r.progress->violation ? r.progress->violation->reason
                                              : std::to_string(r.progress->paths_checked) + " paths up to length " +
                                                    std::to_string(r.progress->max_len)});
    if (r.branch == "builder") {
        r.lemma = verify_checkpoints_lemma(r.automaton, act, x, cfg.lemma_len);
        r.checks.push_back({"checkpoints lemma", r.lemma->ok,
                            r.lemma->ok ? std::to_string(r.lemma->words_checked) + " words" : r.lemma->reason});
    }
    r.checks.push_back(moves_basepoint(r.automaton, act, x, cfg.lemma_len));
    r.growth = check_lambda_large(r.automaton, r.lambda);
    r.checks.push_back({"growth", r.growth->holds, "lambda " + to_string(r.lambda) + ", K " + std::to_string(r.growth->K)});
    r.shape = shape_check(r.automaton, cfg.n, cfg.c1, r.c2);
    const int expected = r.branch == "fixset" ? 1 : 2;
    r.checks.push_back({"shape", r.shape->form == expected,
                        "form " + std::to_string(r.shape->form) + (r.shape->reason.empty() ? "" : ": " + r.shape->reason)});
    r.checks.push_back({"vertex bound", r.shape->vertex_bound,
                        std::to_string(r.automaton.vertex_count()) + " <= " + r.shape->bound.str()});

    if (cfg.d) {
        r.experiment = intersection_experiment(r.automaton, act.generator_count(), *cfg.d, cfg.lengths, cfg.trials, cfg.seed);
    }
    return r;
}

std::string pipeline_report_json(const PipelineReport& r) {
    using nlohmann::ordered_json;
    ordered_json j;
    j["ok"] = r.ok();
    if (const Check* f = r.first_failure()) j["first_failure"] = f->name + ": " + f->detail;
    if (r.action) {
        const MedianGraph& g = r.action->graph();
        j["complex"] = {{"vertices", g.vertex_count()}, {"edges", g.edge_count()}, {"hyperplanes", g.class_count()},
                        {"window", r.action->is_window()}};
        j["basepoint"] = g.name(r.x);
    }
    j["subdivided"] = r.subdivided;
    j["displacement"] = r.displacement;
    std::vector<std::string> fix;
    for (Letter l : r.fix) fix.push_back(letter_name(l));
    j["fix"] = fix;
    j["branch"] = r.branch;
    j["lambda"] = to_string(r.lambda);
    j["c2"] = to_string(r.c2);
    ordered_json checks = ordered_json::array();
    for (const Check& c : r.checks) checks.push_back({{"name", c.name}, {"ok", c.ok}, {"detail", c.detail}});
    j["checks"] = checks;
    if (!r.branch.empty()) {
        j["automaton"] = ordered_json::parse(automaton_to_json(r.automaton, r.action ? &r.action->graph() : nullptr));
    }
    if (r.build) j["trace"] = ordered_json::parse(trace_to_json(r.build->trace));
    if (!r.experiment.empty()) {
        ordered_json e = ordered_json::array();
        for (const auto& p : r.experiment)
            e.push_back({{"L", p.L}, {"trials", p.trials}, {"hits", p.hits}, {"p", p.p}, {"wilson", {p.ci.lo, p.ci.hi}}});
        j["experiment"] = e;
    }
    return j.dump(2) + "\n";
}

}  // namespace cubefix
