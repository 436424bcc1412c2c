#include "taglab/serial.hpp"

#include <filesystem>
#include <fstream>
#include <sstream>

namespace taglab {

namespace {

namespace fs = std::filesystem;

std::vector<std::string> split_ws(const std::string& s) {
    std::istringstream is(s);
    std::vector<std::string> out;
    std::string tok;
    while (is >> tok) out.push_back(tok);
    return out;
}

struct LineReader {
    std::istringstream stream;
    int number = 0;
    explicit LineReader(const std::string& text) : stream(text) {}
    bool next(std::string& line) {
        while (std::getline(stream, line)) {
            ++number;
            if (!line.empty()) return true;
        }
        return false;
    }
    [[noreturn]] void fail(const std::string& msg) const { throw ParseError(msg, number); }
};

F2Vector parse_bits(const std::string& tok, const LineReader& reader, int dim = -1) {
    for (char c : tok)
        if (c != '0' && c != '1') throw ParseError("bad bitstring '" + tok + "'", reader.number);
    if (dim >= 0 && static_cast<int>(tok.size()) != dim)
        throw ParseError("bitstring '" + tok + "' has the wrong length", reader.number);
    return F2Vector::from_string(tok);
}

// shared body for tagged structures and their X/E extensions
struct StructureLines {
    int dim = -1;
    std::vector<std::pair<TagIndex, F2Subspace>> tags;
    bool completed = false;
    bool has_x = false;
    std::vector<F2Vector> x;
    std::vector<std::vector<F2Vector>> eblocks;
};

StructureLines parse_structure_lines(const std::string& text) {
    StructureLines out;
    LineReader reader(text);
    std::string line;
    while (reader.next(line)) {
        auto tokens = split_ws(line);
        if (tokens.empty()) continue;
        const std::string& head = tokens[0];
        if (head == "dim") {
            if (tokens.size() != 2) reader.fail("dim wants one integer");
            out.dim = std::stoi(tokens[1]);
            if (out.dim < 0) reader.fail("negative dimension");
        } else if (head == "tag") {
            if (out.dim < 0) reader.fail("tag before dim");
            if (tokens.size() < 2 || tokens[1].back() != ':')
                reader.fail("expected 'tag <index>:'");
            TagIndex index = std::stoll(tokens[1].substr(0, tokens[1].size() - 1));
            std::vector<F2Vector> rows;
            for (std::size_t i = 2; i < tokens.size(); ++i)
                rows.push_back(parse_bits(tokens[i], reader, out.dim));
            if (rows.empty()) reader.fail("tag without basis rows");
            F2Subspace sub = span(out.dim, rows);
            if (sub.basis() != rows)
                reader.fail("tag basis rows are not in canonical form");
            out.tags.emplace_back(index, std::move(sub));
        } else if (head == "completed") {
            out.completed = true;
        } else if (head == "X:") {
            if (out.dim < 0) reader.fail("X before dim");
            out.has_x = true;
            for (std::size_t i = 1; i < tokens.size(); ++i)
                out.x.push_back(parse_bits(tokens[i], reader, out.dim));
        } else if (head == "Eblock:") {
            if (out.dim < 0) reader.fail("Eblock before dim");
            std::vector<F2Vector> block;
            for (std::size_t i = 1; i < tokens.size(); ++i)
                block.push_back(parse_bits(tokens[i], reader, out.dim));
            if (block.empty()) reader.fail("empty Eblock");
            out.eblocks.push_back(std::move(block));
        } else {
            reader.fail("unknown directive '" + head + "'");
        }
    }
    if (out.dim < 0) throw ParseError("missing dim line", 0);
    return out;
}

void emit_tag_lines(std::ostringstream& os, const TagMap& tags) {
    tags.for_each_explicit([&](TagIndex n, const F2Subspace& sub) {
        os << "tag " << n << ":";
        for (const auto& b : sub.basis()) os << " " << b.to_string();
        os << "\n";
    });
    if (tags.completed()) os << "completed\n";
}

}  // namespace

std::string emit_tagged(const TaggedStructure& t) {
    std::ostringstream os;
    os << "dim " << t.dim << "\n";
    emit_tag_lines(os, t.tags);
    return os.str();
}

TaggedStructure parse_tagged(const std::string& text) {
    StructureLines lines = parse_structure_lines(text);
    if (lines.has_x || !lines.eblocks.empty())
        throw ParseError("tagged structure must not carry X or E lines", 0);
    TaggedStructure t(lines.dim);
    for (auto& [n, sub] : lines.tags) t.tags.set_tag(n, sub);
    if (lines.completed) throw ParseError("tagged structure cannot be completed without X", 0);
    return t;
}

std::string emit_structure(const XEStructure& s) {
    std::ostringstream os;
    os << "dim " << s.dim() << "\n";
    emit_tag_lines(os, s.tags());
    os << "X:";
    for (const auto& v : s.X()) os << " " << v.to_string();
    os << "\n";
    for (const auto& block : s.E.blocks()) {
        os << "Eblock:";
        for (const auto& v : block) os << " " << v.to_string();
        os << "\n";
    }
    return os.str();
}

XEStructure parse_structure(const std::string& text) {
    StructureLines lines = parse_structure_lines(text);
    XEStructure s;
    s.xs.base = TaggedStructure(lines.dim);
    for (auto& [n, sub] : lines.tags) {
        if (s.xs.base.tags.has(n)) throw ParseError("duplicate tag index", 0);
        s.xs.base.tags.set_tag(n, sub);
    }
    std::sort(lines.x.begin(), lines.x.end(), CanonicalLess{});
    s.xs.X = lines.x;
    if (lines.completed) s.xs.base.tags.complete_with_singletons(s.xs.X);
    s.E = lines.eblocks.empty() ? VecPartition::singletons(s.xs.X)
                                : VecPartition::from_blocks(lines.eblocks);
    if (s.E.support() != s.xs.X)
        throw ParseError("E blocks must partition exactly X", 0);
    auto validation = validate_k(s);
    if (!validation.ok()) {
        for (const auto& item : validation.items)
            if (item.status == ValidationItem::Status::fail)
                throw ParseError("structure fails " + item.check, 0);
    }
    return s;
}

std::string emit_graph(const Graph& g) {
    std::ostringstream os;
    os << "n " << g.n << "\n";
    for (const auto& [u, v] : g.edges) os << "e " << u << " " << v << "\n";
    return os.str();
}

Graph parse_graph(const std::string& text) {
    LineReader reader(text);
    std::string line;
    Graph g;
    bool have_n = false;
    while (reader.next(line)) {
        auto tokens = split_ws(line);
        if (tokens.empty()) continue;
        if (tokens[0] == "n") {
            if (tokens.size() != 2) reader.fail("n wants one integer");
            g.n = std::stoi(tokens[1]);
            if (g.n < 0) reader.fail("negative vertex count");
            have_n = true;
        } else if (tokens[0] == "e") {
            if (!have_n) reader.fail("edge before n");
            if (tokens.size() != 3) reader.fail("e wants two vertices");
            int u = std::stoi(tokens[1]), v = std::stoi(tokens[2]);
            if (u >= v) reader.fail("edges must list u < v");
            if (v >= g.n) reader.fail("vertex out of range");
            g.add_edge(u, v);
        } else {
            reader.fail("unknown directive '" + tokens[0] + "'");
        }
    }
    if (!have_n) throw ParseError("missing n line", 0);
    return g;
}

std::string emit_engine(const EngineParams& p) {
    std::ostringstream os;
    os << "engine " << p.n << " " << p.m0 << " " << p.m1 << "\n";
    return os.str();
}

std::string emit_engine_with_export(const EngineParams& p, int guard) {
    std::ostringstream os;
    os << emit_engine(p);
    os << emit_tagged(export_full_tagged(build_engine(p), guard));
    return os.str();
}

EngineParams parse_engine_params(const std::string& text) {
    LineReader reader(text);
    std::string line;
    while (reader.next(line)) {
        auto tokens = split_ws(line);
        if (tokens.empty()) continue;
        if (tokens[0] == "engine") {
            if (tokens.size() != 4) reader.fail("engine wants n m0 m1");
            return EngineParams{std::stoi(tokens[1]), std::stoi(tokens[2]),
                                std::stoi(tokens[3])};
        }
        reader.fail("expected an engine line");
    }
    throw ParseError("missing engine line", 0);
}

std::string emit_coded(const CodedStructure& c) {
    std::ostringstream os;
    os << emit_engine(c.engine.params());
    os << "Uplus:";
    for (const auto& b : c.u_plus.basis()) os << " " << b.to_string();
    os << "\n";
    return os.str();
}

CodedStructure parse_coded(const std::string& text) {
    LineReader reader(text);
    std::string line;
    std::optional<EngineParams> params;
    std::optional<std::vector<F2Vector>> uplus_rows;
    while (reader.next(line)) {
        auto tokens = split_ws(line);
        if (tokens.empty()) continue;
        if (tokens[0] == "engine") {
            if (tokens.size() != 4) reader.fail("engine wants n m0 m1");
            params = EngineParams{std::stoi(tokens[1]), std::stoi(tokens[2]),
                                  std::stoi(tokens[3])};
        } else if (tokens[0] == "Uplus:") {
            if (!params) reader.fail("Uplus before engine");
            std::vector<F2Vector> rows;
            Engine probe = build_engine(*params);
            for (std::size_t i = 1; i < tokens.size(); ++i)
                rows.push_back(parse_bits(tokens[i], reader, probe.dim()));
            uplus_rows = std::move(rows);
        } else {
            reader.fail("unknown directive '" + tokens[0] + "'");
        }
    }
    if (!params) throw ParseError("missing engine line", 0);
    if (!uplus_rows) throw ParseError("missing Uplus line", 0);
    Engine engine = build_engine(*params);
    F2Subspace u_plus = span(engine.dim(), *uplus_rows);
    if (u_plus.basis() != *uplus_rows)
        throw ParseError("Uplus rows are not a canonical basis", 0);
    // the marked X1 elements are recoverable as long as U+ traces a fiber union
    std::vector<F2Vector> z;
    for (const auto& x : engine.x1())
        if (member(x, u_plus)) z.push_back(x);
    return CodedStructure{std::move(engine), std::move(z), std::move(u_plus)};
}

std::string emit_embedding_matrix(const F2LinearMap& map) {
    std::ostringstream os;
    os << "map " << map.domain_dim() << " -> " << map.codomain_dim() << "\n";
    for (const auto& im : map.images()) os << im.to_string() << "\n";
    return os.str();
}

void write_chain(const Chain& chain, const std::string& directory) {
    fs::create_directories(directory);
    {
        std::ostringstream os;
        os << "bound " << chain.bound << "\n";
        os << "seed " << chain.seed << "\n";
        os << "rounds " << chain.rounds_run << "\n";
        os << "complete " << (chain.complete ? 1 : 0) << "\n";
        os << "max_stage_dim " << chain.limits.max_stage_dim << "\n";
        os << "max_stages " << chain.limits.max_stages << "\n";
        os << "stages " << chain.stages.size() << "\n";
        write_file(directory + "/meta.txt", os.str());
    }
    for (std::size_t i = 0; i < chain.stages.size(); ++i) {
        char name[32];
        std::snprintf(name, sizeof(name), "stage_%04zu.txt", i);
        write_file(directory + "/" + name, emit_structure(*chain.stages[i]));
    }
    {
        std::ostringstream os;
        for (std::size_t i = 0; i < chain.inclusions.size(); ++i) {
            os << "inclusion " << i << "\n";
            for (const auto& im : chain.inclusions[i].map.images())
                os << im.to_string() << "\n";
        }
        write_file(directory + "/inclusions.txt", os.str());
    }
    {
        std::ostringstream os;
        for (const auto& rec : chain.log) {
            os << "req " << rec.problem_index << " posed " << rec.posed_stage
               << " satisfied " << rec.satisfied_stage << "\n";
            os << "copy:";
            for (const auto& v : rec.copy_images) os << " " << v.to_string();
            os << "\n";
            os << "copymatch:";
            for (const auto& [a, b] : rec.copy_tag_match) os << " " << a << "->" << b;
            os << "\n";
            os << "witness:";
            for (const auto& v : rec.witness_images) os << " " << v.to_string();
            os << "\n";
            os << "witmatch:";
            for (const auto& [a, b] : rec.witness_tag_match) os << " " << a << "->" << b;
            os << "\n";
        }
        write_file(directory + "/log.txt", os.str());
    }
}

namespace {

std::map<TagIndex, TagIndex> parse_match_tokens(const std::vector<std::string>& tokens,
                                                const LineReader& reader) {
    std::map<TagIndex, TagIndex> out;
    for (std::size_t i = 1; i < tokens.size(); ++i) {
        auto arrow = tokens[i].find("->");
        if (arrow == std::string::npos)
            throw ParseError("bad match token '" + tokens[i] + "'", reader.number);
        out[std::stoll(tokens[i].substr(0, arrow))] =
            std::stoll(tokens[i].substr(arrow + 2));
    }
    return out;
}

}  // namespace

Chain read_chain(const std::string& directory) {
    Chain chain;
    std::size_t stage_count = 0;
    {
        LineReader reader(read_file(directory + "/meta.txt"));
        std::string line;
        while (reader.next(line)) {
            auto tokens = split_ws(line);
            if (tokens.size() != 2) reader.fail("meta lines are key value");
            if (tokens[0] == "bound") chain.bound = std::stoi(tokens[1]);
            else if (tokens[0] == "seed") chain.seed = std::stoull(tokens[1]);
            else if (tokens[0] == "rounds") chain.rounds_run = std::stoi(tokens[1]);
            else if (tokens[0] == "complete") chain.complete = tokens[1] == "1";
            else if (tokens[0] == "max_stage_dim") chain.limits.max_stage_dim = std::stoi(tokens[1]);
            else if (tokens[0] == "max_stages") chain.limits.max_stages = std::stoi(tokens[1]);
            else if (tokens[0] == "stages") stage_count = std::stoul(tokens[1]);
            else reader.fail("unknown meta key '" + tokens[0] + "'");
        }
    }
    for (std::size_t i = 0; i < stage_count; ++i) {
        char name[32];
        std::snprintf(name, sizeof(name), "stage_%04zu.txt", i);
        chain.stages.push_back(
            make_ref(parse_structure(read_file(directory + "/" + name))));
    }
    detail::require(!chain.stages.empty(), "read_chain: no stages");
    {
        LineReader reader(read_file(directory + "/inclusions.txt"));
        std::string line;
        int current = -1;
        std::vector<F2Vector> rows;
        auto flush = [&]() {
            if (current < 0) return;
            const auto& src = chain.stages[static_cast<std::size_t>(current)];
            const auto& dst = chain.stages[static_cast<std::size_t>(current + 1)];
            detail::require(static_cast<int>(rows.size()) == src->dim(),
                            "read_chain: inclusion row count mismatch");
            chain.inclusions.push_back(
                Embedding{src, dst, F2LinearMap(src->dim(), dst->dim(), rows),
                          SigLevel::LXE});
            rows.clear();
        };
        while (reader.next(line)) {
            auto tokens = split_ws(line);
            if (tokens[0] == "inclusion") {
                flush();
                current = std::stoi(tokens[1]);
            } else {
                rows.push_back(parse_bits(tokens[0], reader));
            }
        }
        flush();
    }
    chain.problems = catalog_extension_problems(chain.bound);
    {
        LineReader reader(read_file(directory + "/log.txt"));
        std::string line;
        RequirementRecord rec;
        bool open = false;
        auto flush = [&]() {
            if (open) chain.log.push_back(rec);
            rec = RequirementRecord{};
        };
        while (reader.next(line)) {
            auto tokens = split_ws(line);
            if (tokens[0] == "req") {
                flush();
                open = true;
                if (tokens.size() != 6) reader.fail("bad req line");
                rec.problem_index = std::stoi(tokens[1]);
                rec.posed_stage = std::stoi(tokens[3]);
                rec.satisfied_stage = std::stoi(tokens[5]);
            } else if (tokens[0] == "copy:") {
                for (std::size_t i = 1; i < tokens.size(); ++i)
                    rec.copy_images.push_back(parse_bits(tokens[i], reader));
            } else if (tokens[0] == "copymatch:") {
                rec.copy_tag_match = parse_match_tokens(tokens, reader);
            } else if (tokens[0] == "witness:") {
                for (std::size_t i = 1; i < tokens.size(); ++i)
                    rec.witness_images.push_back(parse_bits(tokens[i], reader));
            } else if (tokens[0] == "witmatch:") {
                rec.witness_tag_match = parse_match_tokens(tokens, reader);
            } else {
                reader.fail("unknown log directive '" + tokens[0] + "'");
            }
        }
        flush();
    }
    return chain;
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    detail::require(in.good(), "cannot read " + path);
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

void write_file(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    detail::require(out.good(), "cannot write " + path);
    out << text;
}

}  // namespace taglab
