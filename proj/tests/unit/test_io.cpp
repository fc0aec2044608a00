#include "cubefix/builder.hpp"
#include "cubefix/error.hpp"
#include "cubefix/io.hpp"
#include "../support/fixtures.hpp"

#include <doctest.h>

#include <filesystem>

using namespace cubefix;
using namespace fixtures;

namespace {

ErrorKind kind_of(const std::function<void()>& f) {
    try {
        f();
    } catch (const Error& e) {
        return e.kind();
    }
    return ErrorKind::Stalled;
}

size_t count_of(const std::string& s, const std::string& needle) {
    size_t n = 0;
    for (size_t p = s.find(needle); p != std::string::npos; p = s.find(needle, p + needle.size())) ++n;
    return n;
}

}  // namespace

TEST_CASE("graph json round trip") {
    MedianGraph g = MedianGraph::validate(grid_graph(3, 2));
    std::string text = graph_to_json(g);
    MedianGraph back = MedianGraph::validate(parse_graph_json(text));
    CHECK(back.names() == g.names());
    CHECK(back.edge_count() == g.edge_count());
    CHECK(graph_to_json(back) == text);

    RawGraph numeric = parse_graph_json(R"({"vertices": [0, 1, 2], "edges": [[0, 1], [1, 2]]})");
    CHECK(numeric.vertices.size() == 3);
}

TEST_CASE("malformed input is a format error") {
    CHECK(kind_of([] { parse_graph_json("{"); }) == ErrorKind::Format);
    CHECK(kind_of([] { parse_graph_json(R"({"vertices": ["a"]})"); }) == ErrorKind::Format);
    CHECK(kind_of([] { parse_graph_json(R"({"vertices": ["a", "a"], "edges": []})"); }) == ErrorKind::Format);
    CHECK(kind_of([] { parse_graph_json(R"({"vertices": ["a"], "edges": [["a", "z"]]})"); }) == ErrorKind::Format);
    CHECK(kind_of([] { parse_action_json(R"({"graph": {"vertices": ["0"], "edges": []}})"); }) == ErrorKind::Format);
    CHECK(kind_of([] { parse_automaton_json("[1, 2"); }) == ErrorKind::Format);
    CHECK(kind_of([] { parse_relators("ab\na?\n"); }) == ErrorKind::Format);
    CHECK(kind_of([] { read_file("/nonexistent/file.json"); }) == ErrorKind::Format);
}

TEST_CASE("action json round trip") {
    auto g = std::make_shared<const MedianGraph>(MedianGraph::validate(path_graph(3)));
    Action refl = Action::total(g, {{2, 1, 0}});
    Action back = parse_action_json(action_to_json(refl));
    CHECK(back.generator_count() == 1);
    for (int v = 0; v < 3; ++v) CHECK(back.step(0, v) == refl.step(0, v));
    CHECK(action_to_json(back) == action_to_json(refl));

    Action z = grid_box_action({2, 2});
    Action zb = parse_action_json(action_to_json(z));
    CHECK(zb.is_window());
    CHECK(zb.basepoint() == z.basepoint());
    CHECK(zb.apply(parse_word("ab'"), zb.basepoint()) == z.apply(parse_word("ab'"), z.basepoint()));

    // the graph may be a path relative to the action file
    auto dir = std::filesystem::temp_directory_path() / "cubefix_io_test";
    std::filesystem::create_directories(dir);
    write_file((dir / "g.json").string(), graph_to_json(*g));
    Action fromfile = parse_action_json(R"({"graph": "g.json", "generators": {"a": {"0": "2", "1": "1", "2": "0"}}})",
                                        dir.string());
    CHECK(fromfile.step(0, 0) == 2);
    CHECK(kind_of([] { parse_action_json(R"({"graph": {"vertices": ["0", "1"], "edges": [["0", "1"]]},
                                              "generators": {"a": {"0": "1"}}})"); }) == ErrorKind::Format);
}

TEST_CASE("automaton json round trip") {
    Action act = tree_ball_action(2, 8);
    const MedianGraph& g = act.graph();
    BuildResult b = build_automaton(act, g.index_of("e"), 1, Rational(3, 4));
    for (const MedianGraph* gp : {static_cast<const MedianGraph*>(nullptr), &g}) {
        std::string text = automaton_to_json(b.automaton, gp);
        Automaton back = parse_automaton_json(text, gp);
        CHECK(back.vertices == b.automaton.vertices);
        CHECK(back.checkpoints == b.automaton.checkpoints);
        CHECK(back.edges.size() == b.automaton.edges.size());
        CHECK(automaton_to_json(back, gp) == text);
        CHECK(count_accepted(back, 5) == count_accepted(b.automaton, 5));
    }
    Automaton blocks = rewire_reduced(no_backtrack_automaton(2));
    blocks.alphabet = Alphabet::blocks(2, 1, true);
    Automaton bb = parse_automaton_json(automaton_to_json(blocks));
    CHECK(bb.alphabet.symbols == blocks.alphabet.symbols);
}

TEST_CASE("relators and presentations") {
    auto rels = parse_relators("# comment\nab\n\nb'a'ba\n1\n");
    REQUIRE(rels.size() == 3);
    CHECK(rels[1] == parse_word("b'a'ba"));
    CHECK(rels[2].empty());
    CHECK(parse_relators(relators_to_text(rels)) == rels);

    Presentation p = parse_presentation("aaa\nbcb'\n");
    CHECK(p.generators == std::vector<std::string>{"a", "b", "c"});
    CHECK(p.relators.size() == 2);
    Presentation q = parse_presentation(presentation_to_json(p));
    CHECK(q.generators == p.generators);
    CHECK(q.relators == p.relators);
}

TEST_CASE("dot output") {
    std::string nb = automaton_to_dot(no_backtrack_automaton(2));
    CHECK(count_of(nb, "->") == 16);
    CHECK(automaton_to_dot(no_backtrack_automaton(2)) == nb);
    Automaton empty;
    empty.alphabet = Alphabet::plain(1);
    empty.add_vertex("s");
    std::string e = automaton_to_dot(empty);
    CHECK(count_of(e, "->") == 0);
    CHECK(count_of(e, "\"s\"") == 1);

    Action act = tree_ball_action(2, 6);
    BuildResult b = build_automaton(act, act.graph().index_of("e"), 1, Rational(3, 4));
    std::string d = automaton_to_dot(b.automaton);
    CHECK(count_of(d, "doublecircle") >= 1);
    CHECK(d == automaton_to_dot(b.automaton));
    CHECK(count_of(graph_to_dot(MedianGraph::validate(path_graph(3))), "--") == 2);
    CHECK(count_of(tree_to_dot(b.trees.front()), "->") == static_cast<size_t>(b.trees.front().nodes.size() - 1));
    CHECK_FALSE(trace_to_json(b.trace).empty());
}
