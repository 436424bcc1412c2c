// serial.hpp
//
// Line-oriented text formats for every value the tools exchange, with
// bit-exact round-trips: structures, graphs, engine parameters, coded
// structures, and chain archives (a directory of stage files plus the
// inclusion matrices and the requirement log).

#pragma once

#include <string>

#include "taglab/chain.hpp"
#include "taglab/graphcodec.hpp"

namespace taglab {

struct ParseError : Error {
    ParseError(const std::string& msg, int line)
        : Error("line " + std::to_string(line) + ": " + msg), line_number(line) {}
    int line_number;
};

std::string emit_tagged(const TaggedStructure& t);
TaggedStructure parse_tagged(const std::string& text);

std::string emit_structure(const XEStructure& s);
XEStructure parse_structure(const std::string& text);

std::string emit_graph(const Graph& g);
Graph parse_graph(const std::string& text);

std::string emit_engine(const EngineParams& p);
std::string emit_engine_with_export(const EngineParams& p,
                                    int guard = kDefaultEnumerationGuard);
EngineParams parse_engine_params(const std::string& text);

std::string emit_coded(const CodedStructure& c);
CodedStructure parse_coded(const std::string& text);

std::string emit_embedding_matrix(const F2LinearMap& map);

void write_chain(const Chain& chain, const std::string& directory);
Chain read_chain(const std::string& directory);

std::string read_file(const std::string& path);
void write_file(const std::string& path, const std::string& text);

}  // namespace taglab
