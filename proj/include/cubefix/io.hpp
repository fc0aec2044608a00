#pragma once

#include "cubefix/action.hpp"
#include "cubefix/automaton.hpp"
#include "cubefix/builder.hpp"
#include "cubefix/median_graph.hpp"
#include "cubefix/random_groups.hpp"

#include <memory>
#include <string>
#include <vector>

namespace cubefix {

// All parse functions throw Error(Format) on malformed input.
std::string read_file(const std::string& path);
void write_file(const std::string& path, const std::string& text);

RawGraph parse_graph_json(const std::string& text);
std::string graph_to_json(const MedianGraph& g);

// {"graph": <graph object or path>, "generators": {"a": {id: id}}, optional "window": {"radius", "basepoint"}}
Action parse_action_json(const std::string& text, const std::string& base_dir = ".");
std::string action_to_json(const Action& a);

// Checkpoints are written as the representative edge [u, v] of the class when a graph is
// given, otherwise as the class number; both forms are read back.
std::string automaton_to_json(const Automaton& a, const MedianGraph* g = nullptr);
Automaton parse_automaton_json(const std::string& text, const MedianGraph* g = nullptr);

// One word per line; blank lines and lines starting with '#' are skipped.
std::vector<Word> parse_relators(const std::string& text);
std::string relators_to_text(const std::vector<Word>& relators);

// Relator lines (generators inferred) or {"generators": [...], "relators": [...]}.
Presentation parse_presentation(const std::string& text);
std::string presentation_to_json(const Presentation& p);

std::string trace_to_json(const BuildTrace& t);

std::string graph_to_dot(const MedianGraph& g);
std::string automaton_to_dot(const Automaton& a);
std::string tree_to_dot(const CheckpointTree& t);

}  // namespace cubefix
