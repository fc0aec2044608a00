#pragma once

#include "cubefix/automaton.hpp"
#include "cubefix/builder.hpp"
#include "cubefix/random_groups.hpp"

#include <optional>
#include <string>
#include <vector>

namespace cubefix {

struct PipelineConfig {
    std::string complex = "tree";  // "tree", "grid" or "file"
    int rank = 2;
    int radius = 12;
    std::vector<int> dims;
    std::string action_path;

    int n = 1;
    Rational c1{1, 3};
    Rational epsilon1{3, 4};
    std::optional<Rational> descent_lambda;
    std::optional<Rational> lambda;  // growth to certify; default min{1/3, (2/3) theta(n, 3/4)}
    int max_len = -1;
    int lemma_len = 8;

    std::optional<Rational> d;  // runs the intersection experiment when set
    std::vector<int> lengths{10, 20, 40};
    int trials = 200;
    std::uint64_t seed = 0;
};

struct Check {
    std::string name;
    bool ok = false;
    std::string detail;
};

struct PipelineReport {
    std::optional<Action> action;
    int x = 0;
    bool subdivided = false;
    long long displacement = 0;
    std::vector<Letter> fix;
    std::string branch;  // "fixset" or "builder"
    Automaton automaton;
    std::optional<BuildResult> build;
    Rational lambda, c2;
    std::optional<GrowthCertificate> growth;
    std::optional<ProgressReport> progress;
    std::optional<LemmaReport> lemma;
    std::optional<ShapeReport> shape;
    std::vector<IntersectionPoint> experiment;
    std::vector<Check> checks;

    bool ok() const;
    const Check* first_failure() const;
};

Action load_action(const PipelineConfig& cfg);
PipelineReport run_pipeline(const PipelineConfig& cfg);
// Same, on an action built by the caller (the complex fields of cfg are ignored).
PipelineReport run_pipeline(const PipelineConfig& cfg, Action act);
std::string pipeline_report_json(const PipelineReport& r);

}  // namespace cubefix
