#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include "cfgates/entangle.hpp"

namespace cfgates {

// Parse or validation failure with an exact source position. `token` names
// the offending identifier when one exists.
class DslError : public std::runtime_error {
public:
    DslError(int line, int column, std::string token, const std::string& reason)
        : std::runtime_error("line " + std::to_string(line) + ":" + std::to_string(column) +
                             ": " + reason),
          line(line),
          column(column),
          token(std::move(token)) {}

    int line;
    int column;
    std::string token;
};

struct GateDecl {
    std::string name;
    GateKind kind = GateKind::nand2;
    int m = 2;
    int n = 2;
    int line = 0;
};

struct PrepDecl {
    enum class Kind { ground, excited, superpose, bit };
    int party = 0;
    Kind kind = Kind::ground;
    double amp_g = 1.0;  // superpose only
    double amp_e = 0.0;
    int bit = 0;         // bit only
    int line = 0;

    AtomState atom() const;
};

struct StageDecl {
    std::string gate;
    std::vector<int> parties;
    bool measure = false;
    StagePort port = StagePort::output0;  // when !measure
    int line = 0;
};

// A validated circuit program: gate declarations, party preparations and the
// postselection pipeline.
struct CircuitProgram {
    std::vector<GateDecl> gates;
    std::vector<PrepDecl> preparations;
    std::vector<StageDecl> stages;

    const GateDecl& find_gate(const std::string& name) const;
};

// Line-oriented grammar:
//   gate <name> kind=<nand|nand3|nor|xor> M=<int> N=<int>
//   prep <party> (g | e | superpose <amp_g> <amp_e> | bit <0|1>)
//   stage <name>(<party>,<party>[,<party>]) (postselect <output0|output1> | measure)
// '#' starts a comment; blank lines are ignored.
CircuitProgram parse_program(const std::string& text);

std::string render_program(const CircuitProgram& program);

PipelineSpec pipeline_from_program(const CircuitProgram& program);
PipelineResult execute_program(const CircuitProgram& program, bool ideal = false);

}  // namespace cfgates
