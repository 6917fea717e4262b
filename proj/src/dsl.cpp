#include "cfgates/dsl.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <sstream>

namespace cfgates {

namespace {

struct Token {
    std::string text;
    int column;  // 1-based
};

// Splits one line into word and punctuation tokens; '(', ')' and ',' are
// single-character tokens, everything else splits on whitespace.
std::vector<Token> tokenize(const std::string& line) {
    std::vector<Token> tokens;
    std::size_t i = 0;
    while (i < line.size()) {
        if (std::isspace(static_cast<unsigned char>(line[i]))) {
            ++i;
            continue;
        }
        if (line[i] == '#') break;
        if (line[i] == '(' || line[i] == ')' || line[i] == ',') {
            tokens.push_back({std::string(1, line[i]), static_cast<int>(i + 1)});
            ++i;
            continue;
        }
        std::size_t start = i;
        while (i < line.size() && !std::isspace(static_cast<unsigned char>(line[i])) &&
               line[i] != '(' && line[i] != ')' && line[i] != ',' && line[i] != '#')
            ++i;
        tokens.push_back({line.substr(start, i - start), static_cast<int>(start + 1)});
    }
    return tokens;
}

class LineParser {
public:
    LineParser(std::vector<Token> tokens, int line) : tokens_(std::move(tokens)), line_(line) {}

    bool done() const { return pos_ >= tokens_.size(); }

    const Token& peek() const {
        if (done()) throw DslError(line_, end_column(), "", "unexpected end of line");
        return tokens_[pos_];
    }

    Token next(const char* what) {
        if (done()) throw DslError(line_, end_column(), "", std::string("expected ") + what);
        return tokens_[pos_++];
    }

    void expect(const std::string& text) {
        Token t = next(text.c_str());
        if (t.text != text)
            throw DslError(line_, t.column, t.text, "expected '" + text + "', got '" + t.text + "'");
    }

    void expect_end() {
        if (!done())
            throw DslError(line_, peek().column, peek().text,
                           "unexpected trailing token '" + peek().text + "'");
    }

    int parse_int(const char* what) {
        Token t = next(what);
        int value = 0;
        auto [p, ec] = std::from_chars(t.text.data(), t.text.data() + t.text.size(), value);
        if (ec != std::errc{} || p != t.text.data() + t.text.size())
            throw DslError(line_, t.column, t.text,
                           std::string("expected an integer for ") + what);
        return value;
    }

    double parse_double(const char* what) {
        Token t = next(what);
        try {
            std::size_t used = 0;
            double value = std::stod(t.text, &used);
            if (used != t.text.size()) throw std::invalid_argument("");
            return value;
        } catch (...) {
            throw DslError(line_, t.column, t.text, std::string("expected a number for ") + what);
        }
    }

    // key=value with a fixed key; returns the value part and its column.
    Token key_value(const std::string& key) {
        Token t = next(key.c_str());
        const std::string prefix = key + "=";
        if (t.text.rfind(prefix, 0) != 0)
            throw DslError(line_, t.column, t.text, "expected " + key + "=<value>");
        return {t.text.substr(prefix.size()), t.column + static_cast<int>(prefix.size())};
    }

    int line() const { return line_; }
    int end_column() const {
        return tokens_.empty() ? 1 : tokens_.back().column + static_cast<int>(tokens_.back().text.size());
    }

private:
    std::vector<Token> tokens_;
    std::size_t pos_ = 0;
    int line_;
};

int parse_party(const Token& t, int line) {
    if (t.text == "bob") return party_bob;
    if (t.text == "charlie") return party_charlie;
    if (t.text == "david") return party_david;
    throw DslError(line, t.column, t.text, "unknown party '" + t.text + "'");
}

GateKind parse_kind(const Token& t, int line, int& parties) {
    parties = 2;
    if (t.text == "nand") return GateKind::nand2;
    if (t.text == "nand3") {
        parties = 3;
        return GateKind::nand_multi;
    }
    if (t.text == "nor") return GateKind::nor;
    if (t.text == "xor") return GateKind::xor_;
    throw DslError(line, t.column, t.text, "unknown gate kind '" + t.text + "'");
}

int parse_int_field(const Token& value, int line, const char* what) {
    int v = 0;
    auto [p, ec] = std::from_chars(value.text.data(), value.text.data() + value.text.size(), v);
    if (ec != std::errc{} || p != value.text.data() + value.text.size())
        throw DslError(line, value.column, value.text,
                       std::string("expected an integer for ") + what);
    return v;
}

int gate_decl_arity(const GateDecl& g) { return g.kind == GateKind::nand_multi ? 3 : 2; }

}  // namespace

AtomState PrepDecl::atom() const {
    switch (kind) {
        case Kind::ground: return atom_ground();
        case Kind::excited: return atom_excited();
        case Kind::bit: return bit ? atom_excited() : atom_ground();
        case Kind::superpose: return atom_superposition({amp_g, 0.0}, {amp_e, 0.0});
    }
    return atom_ground();
}

const GateDecl& CircuitProgram::find_gate(const std::string& name) const {
    for (const GateDecl& g : gates)
        if (g.name == name) return g;
    throw std::invalid_argument("undeclared gate: " + name);
}

CircuitProgram parse_program(const std::string& text) {
    CircuitProgram program;
    std::istringstream in(text);
    std::string raw;
    int line_no = 0;

    while (std::getline(in, raw)) {
        ++line_no;
        std::vector<Token> tokens = tokenize(raw);
        if (tokens.empty()) continue;
        LineParser lp(std::move(tokens), line_no);
        Token head = lp.next("statement");

        if (head.text == "gate") {
            GateDecl decl;
            decl.line = line_no;
            Token name = lp.next("gate name");
            decl.name = name.text;
            for (const GateDecl& g : program.gates)
                if (g.name == decl.name)
                    throw DslError(line_no, name.column, decl.name,
                                   "gate '" + decl.name + "' already declared");
            Token kind = lp.key_value("kind");
            int parties = 2;
            decl.kind = parse_kind(kind, line_no, parties);
            Token m = lp.key_value("M");
            decl.m = parse_int_field(m, line_no, "M");
            Token n = lp.key_value("N");
            decl.n = parse_int_field(n, line_no, "N");
            if (decl.m < 2) throw DslError(line_no, m.column, m.text, "M must be >= 2");
            if (decl.n < 2) throw DslError(line_no, n.column, n.text, "N must be >= 2");
            lp.expect_end();
            program.gates.push_back(decl);
        } else if (head.text == "prep") {
            PrepDecl decl;
            decl.line = line_no;
            Token party = lp.next("party");
            decl.party = parse_party(party, line_no);
            for (const PrepDecl& p : program.preparations)
                if (p.party == decl.party)
                    throw DslError(line_no, party.column, party.text,
                                   "party '" + party.text + "' already prepared");
            Token what = lp.next("preparation");
            if (what.text == "g") {
                decl.kind = PrepDecl::Kind::ground;
            } else if (what.text == "e") {
                decl.kind = PrepDecl::Kind::excited;
            } else if (what.text == "bit") {
                decl.kind = PrepDecl::Kind::bit;
                int b = lp.parse_int("bit value");
                if (b != 0 && b != 1)
                    throw DslError(line_no, what.column, what.text, "bit must be 0 or 1");
                decl.bit = b;
            } else if (what.text == "superpose") {
                decl.kind = PrepDecl::Kind::superpose;
                decl.amp_g = lp.parse_double("amp_g");
                decl.amp_e = lp.parse_double("amp_e");
                const double norm = decl.amp_g * decl.amp_g + decl.amp_e * decl.amp_e;
                if (std::abs(norm - 1.0) > 1e-9)
                    throw DslError(line_no, what.column, what.text,
                                   "superpose amplitudes are not normalized");
            } else {
                throw DslError(line_no, what.column, what.text,
                               "expected g, e, superpose or bit");
            }
            lp.expect_end();
            program.preparations.push_back(decl);
        } else if (head.text == "stage") {
            StageDecl decl;
            decl.line = line_no;
            Token name = lp.next("gate name");
            decl.gate = name.text;
            const GateDecl* gate = nullptr;
            for (const GateDecl& g : program.gates)
                if (g.name == decl.gate) gate = &g;
            if (!gate)
                throw DslError(line_no, name.column, decl.gate,
                               "stage references undeclared gate '" + decl.gate + "'");
            lp.expect("(");
            while (true) {
                Token party = lp.next("party");
                decl.parties.push_back(parse_party(party, line_no));
                Token sep = lp.next("',' or ')'");
                if (sep.text == ")") break;
                if (sep.text != ",")
                    throw DslError(line_no, sep.column, sep.text, "expected ',' or ')'");
            }
            if (static_cast<int>(decl.parties.size()) != gate_decl_arity(*gate))
                throw DslError(line_no, name.column, decl.gate,
                               "gate '" + decl.gate + "' takes " +
                                   std::to_string(gate_decl_arity(*gate)) + " controllers, got " +
                                   std::to_string(decl.parties.size()));
            for (std::size_t i = 0; i < decl.parties.size(); ++i)
                for (std::size_t j = i + 1; j < decl.parties.size(); ++j)
                    if (decl.parties[i] == decl.parties[j])
                        throw DslError(line_no, name.column, decl.gate,
                                       "stage binds the same party twice");
            Token action = lp.next("postselect or measure");
            if (action.text == "measure") {
                decl.measure = true;
            } else if (action.text == "postselect") {
                Token port = lp.next("output0 or output1");
                if (port.text == "output0") decl.port = StagePort::output0;
                else if (port.text == "output1") decl.port = StagePort::output1;
                else
                    throw DslError(line_no, port.column, port.text,
                                   "expected output0 or output1");
            } else {
                throw DslError(line_no, action.column, action.text,
                               "expected postselect or measure");
            }
            lp.expect_end();
            if (!program.stages.empty() && program.stages.back().measure)
                throw DslError(line_no, head.column, "stage",
                               "no stage may follow a measure stage");
            program.stages.push_back(decl);
        } else {
            throw DslError(line_no, head.column, head.text,
                           "unknown statement '" + head.text + "'");
        }
    }

    if (program.stages.empty()) throw DslError(line_no + 1, 1, "", "no pipeline");

    // Every party used by a stage needs a preparation.
    for (const StageDecl& stage : program.stages) {
        for (int party : stage.parties) {
            bool prepared = false;
            for (const PrepDecl& p : program.preparations) prepared |= p.party == party;
            if (!prepared)
                throw DslError(stage.line, 1, party_name(party),
                               "party '" + party_name(party) + "' has no preparation");
        }
    }
    return program;
}

std::string render_program(const CircuitProgram& program) {
    std::ostringstream out;
    for (const GateDecl& g : program.gates) {
        std::string kind;
        switch (g.kind) {
            case GateKind::nand2: kind = "nand"; break;
            case GateKind::nand_multi: kind = "nand3"; break;
            case GateKind::nor: kind = "nor"; break;
            case GateKind::xor_: kind = "xor"; break;
        }
        out << "gate " << g.name << " kind=" << kind << " M=" << g.m << " N=" << g.n << "\n";
    }
    for (const PrepDecl& p : program.preparations) {
        out << "prep " << party_name(p.party) << " ";
        switch (p.kind) {
            case PrepDecl::Kind::ground: out << "g"; break;
            case PrepDecl::Kind::excited: out << "e"; break;
            case PrepDecl::Kind::bit: out << "bit " << p.bit; break;
            case PrepDecl::Kind::superpose: {
                std::ostringstream a;
                a.precision(17);
                a << "superpose " << p.amp_g << " " << p.amp_e;
                out << a.str();
                break;
            }
        }
        out << "\n";
    }
    for (const StageDecl& s : program.stages) {
        out << "stage " << s.gate << "(";
        for (std::size_t i = 0; i < s.parties.size(); ++i) {
            if (i) out << ",";
            out << party_name(s.parties[i]);
        }
        out << ") ";
        if (s.measure) out << "measure";
        else out << "postselect " << (s.port == StagePort::output0 ? "output0" : "output1");
        out << "\n";
    }
    return out.str();
}

PipelineSpec pipeline_from_program(const CircuitProgram& program) {
    int max_party = 0;
    for (const StageDecl& s : program.stages)
        for (int p : s.parties) max_party = std::max(max_party, p);
    for (const PrepDecl& p : program.preparations) max_party = std::max(max_party, p.party);

    PipelineSpec spec;
    spec.parties = max_party + 1;
    spec.preparations.assign(static_cast<std::size_t>(spec.parties), atom_ground());
    for (const PrepDecl& p : program.preparations)
        spec.preparations[static_cast<std::size_t>(p.party)] = p.atom();

    int stage_no = 0;
    for (const StageDecl& s : program.stages) {
        ++stage_no;
        const GateDecl& g = program.find_gate(s.gate);
        PipelineStage stage;
        stage.gate = {g.kind, g.m, g.n, g.kind == GateKind::nand_multi ? 3 : 2};
        stage.bindings = s.parties;
        if (!s.measure) {
            stage.postselect = s.port;
            stage.reject_label = "D_F" + std::to_string(stage_no);
        }
        spec.stages.push_back(std::move(stage));
    }
    return spec;
}

PipelineResult execute_program(const CircuitProgram& program, bool ideal) {
    return run_pipeline(pipeline_from_program(program), ideal);
}

}  // namespace cfgates
