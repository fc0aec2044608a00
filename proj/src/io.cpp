#include "cubefix/io.hpp"

#include "cubefix/error.hpp"

#include <json.hpp>

#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>

namespace cubefix {

using nlohmann::json;
using ordered_json = nlohmann::ordered_json;

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) fail(ErrorKind::Format, "cannot read " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_file(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) fail(ErrorKind::Format, "cannot write " + path);
    out << text;
}

namespace {

json parse_json(const std::string& text) {
    try {
        return json::parse(text);
    } catch (const json::exception& e) {
        fail(ErrorKind::Format, std::string("malformed JSON: ") + e.what());
    }
}

std::string id_string(const json& j) {
    if (j.is_string()) return j.get<std::string>();
    if (j.is_number_integer()) return std::to_string(j.get<long long>());
    fail(ErrorKind::Format, "vertex ids must be strings or integers");
}

int vertex_of(const MedianGraph& g, const std::string& id) {
    try {
        return g.index_of(id);
    } catch (const Error&) {
        fail(ErrorKind::Format, "unknown vertex " + id);
    }
}

int generator_index(const std::string& name) {
    if (name.size() != 1 || name[0] < 'a' || name[0] > 'z') fail(ErrorKind::Format, "generator names are single letters a..z");
    return name[0] - 'a';
}

Word word_of(const std::string& text) {
    try {
        return parse_word(text);
    } catch (const Error& e) {
        fail(ErrorKind::Format, e.what());
    }
}

}  // namespace

RawGraph parse_graph_json(const std::string& text) {
    json j = parse_json(text);
    try {
        RawGraph raw;
        for (const json& v : j.at("vertices")) {
            std::string id = id_string(v);
            if (raw.index_of(id) >= 0) fail(ErrorKind::Format, "duplicate vertex " + id);
            raw.add_vertex(id);
        }
        for (const json& e : j.at("edges")) {
            if (!e.is_array() || e.size() != 2) fail(ErrorKind::Format, "edges are [id, id] pairs");
            int u = raw.index_of(id_string(e[0])), v = raw.index_of(id_string(e[1]));
            if (u < 0 || v < 0) fail(ErrorKind::Format, "edge with unknown endpoint");
            raw.add_edge(u, v);
        }
        return raw;
    } catch (const json::exception& e) {
        fail(ErrorKind::Format, std::string("bad graph: ") + e.what());
    }
}

std::string graph_to_json(const MedianGraph& g) {
    ordered_json j;
    j["vertices"] = g.names();
    json edges = json::array();
    for (int e = 0; e < g.edge_count(); ++e) {
        auto [u, v] = g.edge(e);
        edges.push_back({g.name(u), g.name(v)});
    }
    j["edges"] = edges;
    return j.dump(2) + "\n";
}

Action parse_action_json(const std::string& text, const std::string& base_dir) {
    json j = parse_json(text);
    try {
        json gj = j.at("graph");
        RawGraph raw = gj.is_string() ? parse_graph_json(read_file(base_dir + "/" + gj.get<std::string>()))
                                      : parse_graph_json(gj.dump());
        auto g = std::make_shared<const MedianGraph>(MedianGraph::validate(raw));
        const json& gens = j.at("generators");
        const int k = static_cast<int>(gens.size());
        std::vector<std::vector<int>> maps(static_cast<size_t>(k), std::vector<int>(static_cast<size_t>(g->vertex_count()), -1));
        for (auto it = gens.begin(); it != gens.end(); ++it) {
            int gi = generator_index(it.key());
            if (gi >= k) fail(ErrorKind::Format, "generators must be a, b, ... without gaps");
            for (auto m = it.value().begin(); m != it.value().end(); ++m)
                maps[static_cast<size_t>(gi)][static_cast<size_t>(vertex_of(*g, m.key()))] = vertex_of(*g, id_string(m.value()));
        }
        if (!j.contains("window")) {
            for (const auto& m : maps)
                if (std::find(m.begin(), m.end(), -1) != m.end()) fail(ErrorKind::Format, "generator map is not total");
            return Action::total(g, maps);
        }
        const json& w = j.at("window");
        std::vector<std::vector<int>> letter_maps;
        for (const auto& m : maps) {
            std::vector<int> inv(m.size(), -1);
            for (size_t v = 0; v < m.size(); ++v)
                if (m[v] >= 0) inv[static_cast<size_t>(m[v])] = static_cast<int>(v);
            letter_maps.push_back(m);
            letter_maps.push_back(inv);
        }
        return Action::window(g, letter_maps, w.at("radius").get<int>(), vertex_of(*g, id_string(w.at("basepoint"))));
    } catch (const json::exception& e) {
        fail(ErrorKind::Format, std::string("bad action: ") + e.what());
    }
}

std::string action_to_json(const Action& a) {
    const MedianGraph& g = a.graph();
    ordered_json j;
    j["graph"] = json::parse(graph_to_json(g));
    ordered_json gens = ordered_json::object();
    for (int gi = 0; gi < a.generator_count(); ++gi) {
        ordered_json m = ordered_json::object();
        for (int v = 0; v < g.vertex_count(); ++v) {
            int t = a.step(letter(gi, false), v);
            if (t >= 0) m[g.name(v)] = g.name(t);
        }
        gens[letter_name(letter(gi, false))] = m;
    }
    j["generators"] = gens;
    if (a.is_window()) j["window"] = {{"radius", a.validity_radius()}, {"basepoint", g.name(a.basepoint())}};
    return j.dump(2) + "\n";
}

std::string automaton_to_json(const Automaton& a, const MedianGraph* g) {
    ordered_json j;
    j["k"] = a.alphabet.k;
    if (a.alphabet.size() > 0 && a.alphabet.symbols[0].size() != 1) {
        j["m"] = a.alphabet.symbols[0].size();
        j["reduced_blocks"] = a.alphabet.size() != static_cast<int>(Alphabet::blocks(a.alphabet.k, static_cast<int>(a.alphabet.symbols[0].size()), false).symbols.size());
    }
    j["vertices"] = a.vertices;
    j["start"] = a.vertices[static_cast<size_t>(a.start)];
    ordered_json edges = ordered_json::array();
    for (const AutEdge& e : a.edges)
        edges.push_back({{"from", a.vertices[static_cast<size_t>(e.from)]},
                         {"to", a.vertices[static_cast<size_t>(e.to)]},
                         {"label", format_word(a.alphabet.symbols[static_cast<size_t>(e.label)])}});
    j["edges"] = edges;
    ordered_json cps = ordered_json::object();
    for (auto [v, h] : a.checkpoints) {
        if (g) {
            auto [x, y] = g->edge(g->representative_edge(h));
            cps[a.vertices[static_cast<size_t>(v)]] = {g->name(x), g->name(y)};
        } else {
            cps[a.vertices[static_cast<size_t>(v)]] = h;
        }
    }
    j["checkpoints"] = cps;
    return j.dump(2) + "\n";
}

Automaton parse_automaton_json(const std::string& text, const MedianGraph* g) {
    json j = parse_json(text);
    try {
        Automaton a;
        std::vector<Word> labels;
        for (const json& e : j.at("edges")) labels.push_back(word_of(e.at("label").get<std::string>()));
        int k = j.contains("k") ? j["k"].get<int>() : 0;
        for (const Word& w : labels)
            for (Letter l : w) k = std::max(k, generator_of(l) + 1);
        if (k < 1) k = 1;
        if (j.contains("m")) a.alphabet = Alphabet::blocks(k, j["m"].get<int>(), j.value("reduced_blocks", false));
        else a.alphabet = Alphabet::plain(k);
        for (const json& v : j.at("vertices")) {
            std::string id = id_string(v);
            if (std::find(a.vertices.begin(), a.vertices.end(), id) != a.vertices.end())
                fail(ErrorKind::Format, "duplicate automaton vertex " + id);
            a.add_vertex(id);
        }
        auto vertex = [&](const json& v) {
            std::string id = id_string(v);
            auto it = std::find(a.vertices.begin(), a.vertices.end(), id);
            if (it == a.vertices.end()) fail(ErrorKind::Format, "unknown automaton vertex " + id);
            return static_cast<int>(it - a.vertices.begin());
        };
        a.start = vertex(j.at("start"));
        size_t i = 0;
        for (const json& e : j.at("edges")) {
            int label = a.alphabet.index_of(labels[i++]);
            if (label < 0) fail(ErrorKind::Format, "label outside the alphabet: " + e.at("label").get<std::string>());
            a.add_edge(vertex(e.at("from")), vertex(e.at("to")), label);
        }
        if (j.contains("checkpoints")) {
            const json& cps = j["checkpoints"];
            for (auto it = cps.begin(); it != cps.end(); ++it) {
                int v = vertex(it.key());
                const json& ref = it.value();
                if (ref.is_number_integer()) {
                    a.checkpoints[v] = ref.get<int>();
                } else if (ref.is_array() && ref.size() == 2) {
                    if (!g) fail(ErrorKind::Format, "edge-form checkpoints need a graph");
                    int e = g->edge_id(vertex_of(*g, id_string(ref[0])), vertex_of(*g, id_string(ref[1])));
                    if (e < 0) fail(ErrorKind::Format, "checkpoint edge is not an edge");
                    a.checkpoints[v] = g->class_of_edge(e);
                } else {
                    fail(ErrorKind::Format, "bad checkpoint reference");
                }
            }
        }
        return a;
    } catch (const json::exception& e) {
        fail(ErrorKind::Format, std::string("bad automaton: ") + e.what());
    }
}

std::vector<Word> parse_relators(const std::string& text) {
    std::vector<Word> out;
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) {
        auto b = line.find_first_not_of(" \t\r");
        if (b == std::string::npos || line[b] == '#') continue;
        auto e = line.find_last_not_of(" \t\r");
        out.push_back(word_of(line.substr(b, e - b + 1)));
    }
    return out;
}

std::string relators_to_text(const std::vector<Word>& relators) {
    std::string out;
    for (const Word& w : relators) out += (w.empty() ? std::string("1") : format_word(w)) + "\n";
    return out;
}

Presentation parse_presentation(const std::string& text) {
    Presentation p;
    p.origin = "manual";
    auto b = text.find_first_not_of(" \t\r\n");
    if (b != std::string::npos && text[b] == '{') {
        json j = parse_json(text);
        try {
            for (const json& g : j.at("generators")) p.generators.push_back(g.get<std::string>());
            for (const json& r : j.at("relators")) p.relators.push_back(word_of(r.get<std::string>()));
        } catch (const json::exception& e) {
            fail(ErrorKind::Format, std::string("bad presentation: ") + e.what());
        }
        for (size_t i = 0; i < p.generators.size(); ++i)
            if (generator_index(p.generators[i]) != static_cast<int>(i)) fail(ErrorKind::Format, "generators must be a, b, ...");
    } else {
        p.relators = parse_relators(text);
        int k = 0;
        for (const Word& w : p.relators)
            for (Letter l : w) k = std::max(k, generator_of(l) + 1);
        for (int g = 0; g < k; ++g) p.generators.push_back(letter_name(letter(g, false)));
    }
    for (const Word& w : p.relators)
        for (Letter l : w)
            if (generator_of(l) >= static_cast<int>(p.generators.size())) fail(ErrorKind::Format, "relator uses an undeclared generator");
    return p;
}

std::string presentation_to_json(const Presentation& p) {
    ordered_json j;
    j["generators"] = p.generators;
    std::vector<std::string> rels;
    for (const Word& w : p.relators) rels.push_back(format_word(w));
    j["relators"] = rels;
    j["origin"] = p.origin;
    return j.dump(2) + "\n";
}

std::string trace_to_json(const BuildTrace& t) {
    ordered_json j;
    ordered_json c;
    c["n"] = t.constants.n;
    c["epsilon1"] = to_string(t.constants.epsilon1);
    c["epsilon0"] = to_string(t.constants.epsilon0);
    c["lambda"] = to_string(t.constants.lambda);
    std::vector<std::string> gamma;
    for (size_t i = 1; i < t.constants.gamma.size(); ++i) gamma.push_back(to_string(t.constants.gamma[i]));
    c["gamma"] = gamma;
    c["theta"] = to_string(t.constants.theta());
    j["constants"] = c;
    std::vector<std::string> letters;
    for (Letter l : t.letters) letters.push_back(letter_name(l));
    j["letters"] = letters;
    ordered_json trees = ordered_json::array();
    for (const TreeTrace& tr : t.trees) {
        ordered_json o;
        o["root"] = tr.root == kStartLabel ? json("s") : json(tr.root);
        o["method"] = tr.method;
        ordered_json stages = ordered_json::array();
        for (const StageTrace& s : tr.stages)
            stages.push_back({{"index", s.index}, {"leaves", s.leaves}, {"class_one", s.class_one},
                              {"class_two", s.class_two}, {"root_class_one", s.root_class_one},
                              {"deleted", s.deleted}, {"star", s.star}, {"depth", s.depth}});
        o["stages"] = stages;
        ordered_json wits = ordered_json::array();
        for (const WitnessRecord& w : tr.witnesses)
            wits.push_back({{"word", format_word(w.word)}, {"leaf_label", w.leaf_label}, {"rule", w.rule}});
        o["witnesses"] = wits;
        o["flags"] = tr.flags;
        o["star_ok"] = tr.star_ok;
        o["crossing_ok"] = tr.crossing_ok;
        o["verified"] = tr.verified;
        o["growth"] = to_string(tr.growth);
        o["declared"] = to_string(tr.declared);
        trees.push_back(o);
    }
    j["trees"] = trees;
    ordered_json descents = ordered_json::array();
    for (const DescentCertificate& d : t.descents) {
        std::vector<std::string> P, sub;
        for (Letter l : d.P) P.push_back(letter_name(l));
        for (Letter l : d.subset) sub.push_back(letter_name(l));
        descents.push_back({{"level", d.level}, {"H", d.H}, {"lambda", to_string(d.lambda)}, {"P", P},
                            {"subset", sub}, {"size_ok", d.size_ok}, {"all_cross_H", d.all_cross_H},
                            {"crossing_before", d.crossing_before}, {"crossing_after", d.crossing_after},
                            {"backwards_ok", d.backwards_ok}});
    }
    j["descents"] = descents;
    j["final_level"] = t.final_level;
    j["flags"] = t.flags;
    return j.dump(2) + "\n";
}

namespace {

const char* kPalette[] = {"red", "blue", "darkgreen", "orange", "purple", "brown", "magenta", "cyan4", "gold3", "gray40"};

std::string color_of(int h) { return kPalette[static_cast<size_t>(h) % (sizeof(kPalette) / sizeof(kPalette[0]))]; }

std::string dot_quote(const std::string& s) {
    std::string out = "\"";
    for (char ch : s) {
        if (ch == '"' || ch == '\\') out += '\\';
        out += ch;
    }
    return out + "\"";
}

}  // namespace

std::string graph_to_dot(const MedianGraph& g) {
    std::vector<std::string> names = g.names();
    std::sort(names.begin(), names.end());
    std::vector<std::string> edges;
    for (int e = 0; e < g.edge_count(); ++e) {
        auto [u, v] = g.edge(e);
        std::string a = g.name(u), b = g.name(v);
        if (b < a) std::swap(a, b);
        int h = g.class_of_edge(e);
        edges.push_back("  " + dot_quote(a) + " -- " + dot_quote(b) + " [color=" + color_of(h) + ", label=\"H" +
                        std::to_string(h) + "\"];\n");
    }
    std::sort(edges.begin(), edges.end());
    std::string out = "graph G {\n";
    for (const auto& n : names) out += "  " + dot_quote(n) + ";\n";
    for (const auto& e : edges) out += e;
    return out + "}\n";
}

std::string automaton_to_dot(const Automaton& a) {
    std::vector<std::string> nodes, edges;
    for (int v = 0; v < a.vertex_count(); ++v) {
        std::string attrs;
        auto it = a.checkpoints.find(v);
        if (it != a.checkpoints.end())
            attrs = " [shape=doublecircle, color=" + color_of(it->second) + ", xlabel=\"H" + std::to_string(it->second) + "\"]";
        else if (v == a.start)
            attrs = " [shape=box]";
        nodes.push_back("  " + dot_quote(a.vertices[static_cast<size_t>(v)]) + attrs + ";\n");
    }
    for (const AutEdge& e : a.edges)
        edges.push_back("  " + dot_quote(a.vertices[static_cast<size_t>(e.from)]) + " -> " +
                        dot_quote(a.vertices[static_cast<size_t>(e.to)]) + " [label=" +
                        dot_quote(format_word(a.alphabet.symbols[static_cast<size_t>(e.label)])) + "];\n");
    std::sort(nodes.begin(), nodes.end());
    std::sort(edges.begin(), edges.end());
    std::string out = "digraph A {\n";
    for (const auto& n : nodes) out += n;
    for (const auto& e : edges) out += e;
    return out + "}\n";
}

std::string tree_to_dot(const CheckpointTree& t) {
    auto name = [&](int v) { return dot_quote(v == 0 ? "root" : format_word(t.word_of(v))); };
    std::vector<std::string> nodes, edges;
    for (size_t v = 0; v < t.nodes.size(); ++v) {
        const auto& n = t.nodes[v];
        std::string attrs;
        int label = v == 0 ? t.root_label : n.leaf_label;
        if (label >= 0)
            attrs = " [shape=doublecircle, color=" + color_of(label) + ", xlabel=\"H" + std::to_string(label) + "\"]";
        nodes.push_back("  " + name(static_cast<int>(v)) + attrs + ";\n");
        if (n.parent >= 0)
            edges.push_back("  " + name(n.parent) + " -> " + name(static_cast<int>(v)) + " [label=" +
                            dot_quote(letter_name(n.label)) + "];\n");
    }
    std::sort(nodes.begin(), nodes.end());
    std::sort(edges.begin(), edges.end());
    std::string out = "digraph T {\n";
    for (const auto& n : nodes) out += n;
    for (const auto& e : edges) out += e;
    return out + "}\n";
}

}  // namespace cubefix
