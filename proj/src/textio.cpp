#include "hma/textio.hpp"

#include <algorithm>
#include <cctype>
#include <map>
#include <sstream>

namespace hma {

ParseFailure::ParseFailure(std::vector<ParseError> errors)
    : Error(errors.empty() ? std::string("parse failed") : to_string(errors.front())), errors_(std::move(errors)) {}

std::string to_string(const ParseError& e) {
    return e.span.file + ":" + std::to_string(e.span.line) + ":" + std::to_string(e.span.column) + ": expected " +
           e.expected + ", found " + e.found;
}

namespace {

// ---------------------------------------------------------------------------
// Lexer

enum class Tok { ident, lbrace, rbrace, comma, semi, minus, slash, arrow, end, invalid };

struct Token {
    Tok kind = Tok::end;
    std::string text;
    SourceSpan span;
};

std::string describe(const Token& t) {
    switch (t.kind) {
    case Tok::ident:
        return is_keyword(t.text) ? "keyword '" + t.text + "'" : "identifier '" + t.text + "'";
    case Tok::end:
        return "end of input";
    case Tok::invalid:
        return "'" + t.text + "'";
    default:
        return "'" + t.text + "'";
    }
}

class Lexer {
public:
    Lexer(std::string_view text, std::string_view file) : text_(text), file_(file) {}

    std::vector<Token> run(std::vector<ParseError>& errors) {
        std::vector<Token> out;
        while (true) {
            skip_trivia(errors);
            if (pos_ >= text_.size()) {
                out.push_back(Token{Tok::end, "", span_at(pos_, 0)});
                return out;
            }
            const std::size_t start = pos_;
            const char c = text_[pos_];
            if (std::isalnum(static_cast<unsigned char>(c)) || c == '_') {
                while (pos_ < text_.size() &&
                       (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_')) {
                    ++pos_;
                }
                std::string word(text_.substr(start, pos_ - start));
                if (!std::isalpha(static_cast<unsigned char>(word.front()))) {
                    errors.push_back({span_at(start, word.size()), "identifier starting with a letter",
                                      "'" + word + "'"});
                    out.push_back(Token{Tok::invalid, word, span_at(start, word.size())});
                } else {
                    out.push_back(Token{Tok::ident, word, span_at(start, word.size())});
                }
                continue;
            }
            ++pos_;
            switch (c) {
            case '{':
                out.push_back(Token{Tok::lbrace, "{", span_at(start, 1)});
                break;
            case '}':
                out.push_back(Token{Tok::rbrace, "}", span_at(start, 1)});
                break;
            case ',':
                out.push_back(Token{Tok::comma, ",", span_at(start, 1)});
                break;
            case ';':
                out.push_back(Token{Tok::semi, ";", span_at(start, 1)});
                break;
            case '/':
                out.push_back(Token{Tok::slash, "/", span_at(start, 1)});
                break;
            case '-':
                if (pos_ < text_.size() && text_[pos_] == '>') {
                    ++pos_;
                    out.push_back(Token{Tok::arrow, "->", span_at(start, 2)});
                } else {
                    out.push_back(Token{Tok::minus, "-", span_at(start, 1)});
                }
                break;
            default: {
                // keep multi-byte UTF-8 sequences together in the report
                std::size_t len = 1;
                while (start + len < text_.size() && (static_cast<unsigned char>(text_[start + len]) & 0xC0) == 0x80) {
                    ++len;
                }
                pos_ = start + len;
                std::string bad(text_.substr(start, len));
                errors.push_back({span_at(start, len), "token", "character '" + bad + "'"});
                out.push_back(Token{Tok::invalid, bad, span_at(start, len)});
            }
            }
        }
    }

private:
    void skip_trivia(std::vector<ParseError>& errors) {
        while (pos_ < text_.size()) {
            const char c = text_[pos_];
            if (std::isspace(static_cast<unsigned char>(c))) {
                ++pos_;
            } else if (text_.substr(pos_, 2) == "//") {
                while (pos_ < text_.size() && text_[pos_] != '\n') ++pos_;
            } else if (text_.substr(pos_, 2) == "/*") {
                const auto close = text_.find("*/", pos_ + 2);
                if (close == std::string_view::npos) {
                    errors.push_back({span_at(pos_, 2), "'*/' closing the comment", "end of input"});
                    pos_ = text_.size();
                } else {
                    pos_ = close + 2;
                }
            } else {
                return;
            }
        }
    }

    SourceSpan span_at(std::size_t offset, std::size_t length) {
        // line starts are scanned forward incrementally; offsets only grow
        while (scanned_ < offset && scanned_ < text_.size()) {
            if (text_[scanned_] == '\n') {
                ++line_;
                line_start_ = scanned_ + 1;
            }
            ++scanned_;
        }
        return SourceSpan{std::string(file_), line_, offset - line_start_ + 1, length};
    }

    std::string_view text_;
    std::string_view file_;
    std::size_t pos_ = 0;
    std::size_t scanned_ = 0;
    std::size_t line_ = 1;
    std::size_t line_start_ = 0;
};

// ---------------------------------------------------------------------------
// Parser

constexpr std::size_t max_nesting = 256;

struct NameRef {
    std::string name;
    SourceSpan span;
};

struct TransitionDecl {
    NameRef source;
    NameRef input;
    std::optional<NameRef> output;
    NameRef target;
};

class Parser {
public:
    explicit Parser(std::vector<Token> tokens) : tokens_(std::move(tokens)) {}

    HmaParse run(std::vector<ParseError> errors) {
        errors_ = std::move(errors);
        document();
        HmaParse result;
        if (errors_.empty()) resolve(result);
        result.errors = std::move(errors_);
        if (!result.errors.empty()) result.document.reset();
        return result;
    }

private:
    struct Recover {};

    const Token& peek() const { return tokens_[pos_]; }
    bool at(Tok kind) const { return peek().kind == kind; }
    bool at_keyword(std::string_view kw) const { return at(Tok::ident) && peek().text == kw; }

    const Token& advance() {
        const Token& t = tokens_[pos_];
        if (pos_ + 1 < tokens_.size()) ++pos_;
        return t;
    }

    [[noreturn]] void fail(const std::string& expected) {
        errors_.push_back({peek().span, expected, describe(peek())});
        throw Recover{};
    }

    void expect(Tok kind, const std::string& expected) {
        if (!at(kind)) fail(expected);
        advance();
    }

    void expect_keyword(std::string_view kw) {
        if (!at_keyword(kw)) fail("'" + std::string(kw) + "'");
        advance();
    }

    NameRef identifier(const std::string& expected) {
        if (!at(Tok::ident) || is_keyword(peek().text)) fail(expected);
        const Token& t = advance();
        return {t.text, t.span};
    }

    // Skips to just past the next ';' or up to a token that can start an item.
    void synchronize() {
        const std::size_t start = pos_;
        while (!at(Tok::end)) {
            if (at(Tok::semi)) {
                advance();
                return;
            }
            if (at(Tok::rbrace)) return;
            if ((at_keyword("state") || at_keyword("trans") || at_keyword("initial")) && pos_ != start) return;
            advance();
        }
    }

    void document() {
        try {
            expect_keyword("hma");
            name_ = identifier("automaton name");
            expect(Tok::lbrace, "'{'");
            messages();
        } catch (Recover) {
            synchronize();
        }

        enum class Section { states, transitions, initial } section = Section::states;
        while (!at(Tok::end) && !at(Tok::rbrace)) {
            const std::size_t before = pos_;
            try {
                if (at_keyword("state")) {
                    if (section != Section::states) fail("'trans', 'initial' or '}'");
                    state_decl(std::nullopt, 0);
                } else if (at_keyword("trans")) {
                    if (section == Section::initial) fail("'}'");
                    section = Section::transitions;
                    trans_decl();
                } else if (at_keyword("initial")) {
                    if (section == Section::initial) fail("'}'");
                    section = Section::initial;
                    init_block();
                } else {
                    fail("'state', 'trans', 'initial' or '}'");
                }
            } catch (Recover) {
                synchronize();
            }
            if (pos_ == before) advance();
        }
        if (at(Tok::rbrace)) {
            advance();
            if (!at(Tok::end)) errors_.push_back({peek().span, "end of input", describe(peek())});
        } else {
            errors_.push_back({peek().span, "'}'", describe(peek())});
        }
    }

    void messages() {
        expect_keyword("messages");
        expect(Tok::lbrace, "'{'");
        if (at(Tok::rbrace)) {
            advance();
            return;
        }
        messages_.push_back(identifier("message identifier"));
        while (at(Tok::comma)) {
            advance();
            messages_.push_back(identifier("message identifier"));
        }
        expect(Tok::rbrace, "',' or '}'");
    }

    void state_decl(const std::optional<NameRef>& parent, std::size_t nesting) {
        if (nesting >= max_nesting) fail("at most " + std::to_string(max_nesting) + " nesting levels");
        expect_keyword("state");
        auto name = identifier("state identifier");
        states_.push_back(name);
        if (parent) containment_.emplace_back(name, *parent);
        if (at_keyword("initial")) {
            advance();
            initial_.push_back(name);
        }
        if (at(Tok::semi)) {
            advance();
            return;
        }
        if (!at(Tok::lbrace)) fail("';' or '{'");
        advance();
        while (!at(Tok::rbrace)) {
            if (!at_keyword("state")) fail("'state' or '}'");
            state_decl(name, nesting + 1);
        }
        advance();
    }

    void trans_decl() {
        expect_keyword("trans");
        TransitionDecl decl;
        decl.source = identifier("state identifier");
        expect(Tok::minus, "'-'");
        decl.input = identifier("message identifier");
        expect(Tok::slash, "'/'");
        if (!at(Tok::arrow)) decl.output = identifier("output message or '->'");
        expect(Tok::arrow, "'->'");
        decl.target = identifier("state identifier");
        expect(Tok::semi, "';'");
        transitions_.push_back(std::move(decl));
    }

    void init_block() {
        expect_keyword("initial");
        expect(Tok::lbrace, "'{'");
        initial_.push_back(identifier("state identifier"));
        while (at(Tok::comma)) {
            advance();
            initial_.push_back(identifier("state identifier"));
        }
        expect(Tok::rbrace, "',' or '}'");
    }

    // Attribution: duplicate declarations and references to undeclared names.
    void resolve(HmaParse& result) {
        std::set<StateId> states;
        std::set<Message> messages;
        for (const auto& m : messages_) {
            if (!messages.insert(Message{m.name}).second) {
                errors_.push_back({m.span, "fresh message identifier", "duplicate message '" + m.name + "'"});
            }
        }
        for (const auto& s : states_) {
            if (!states.insert(StateId{s.name}).second) {
                errors_.push_back({s.span, "fresh state identifier", "duplicate state '" + s.name + "'"});
            }
        }
        auto state_ref = [&](const NameRef& ref) {
            if (!states.contains(StateId{ref.name})) {
                errors_.push_back({ref.span, "declared state", "undeclared state '" + ref.name + "'"});
            }
            return StateId{ref.name};
        };
        auto message_ref = [&](const NameRef& ref) {
            if (!messages.contains(Message{ref.name})) {
                errors_.push_back({ref.span, "declared message", "undeclared message '" + ref.name + "'"});
            }
            return Message{ref.name};
        };

        std::set<Containment> containment;
        for (const auto& [child, parent] : containment_) containment.insert({StateId{child.name}, StateId{parent.name}});
        std::set<Transition> transitions;
        for (const auto& d : transitions_) {
            Transition t{state_ref(d.source), message_ref(d.input), epsilon, state_ref(d.target)};
            if (d.output) t.output = message_ref(*d.output);
            transitions.insert(std::move(t));
        }
        std::set<StateId> initial;
        for (const auto& i : initial_) initial.insert(state_ref(i));

        if (!errors_.empty()) return;
        result.document = Hma(name_.name, std::move(states), std::move(containment), std::move(messages),
                              std::move(transitions), std::move(initial));
    }

    std::vector<Token> tokens_;
    std::size_t pos_ = 0;
    std::vector<ParseError> errors_;

    NameRef name_;
    std::vector<NameRef> messages_;
    std::vector<NameRef> states_;
    std::vector<std::pair<NameRef, NameRef>> containment_;
    std::vector<TransitionDecl> transitions_;
    std::vector<NameRef> initial_;
};

void write_state(std::ostringstream& out, const StateId& s, const std::map<StateId, std::vector<StateId>>& children,
                 const std::set<StateId>& initial, std::size_t indent) {
    out << std::string(indent, ' ') << "state " << s.name;
    if (initial.contains(s)) out << " initial";
    const auto it = children.find(s);
    if (it == children.end()) {
        out << ";\n";
        return;
    }
    out << " {\n";
    for (const auto& c : it->second) write_state(out, c, children, initial, indent + 2);
    out << std::string(indent, ' ') << "}\n";
}

void write_side(std::ostringstream& out, const std::vector<Message>& side) {
    if (side.empty()) {
        out << '-';
        return;
    }
    for (std::size_t k = 0; k < side.size(); ++k) out << (k ? " " : "") << side[k].name;
}

}  // namespace

HmaParse parse_hma(std::string_view text, std::string_view file) {
    std::vector<ParseError> errors;
    auto tokens = Lexer(text, file).run(errors);
    return Parser(std::move(tokens)).run(std::move(errors));
}

Hma parse_hma_or_throw(std::string_view text, std::string_view file) {
    auto parsed = parse_hma(text, file);
    if (!parsed.ok()) throw ParseFailure(std::move(parsed.errors));
    return std::move(*parsed.document);
}

std::string serialize_hma(const Hma& h) {
    Hierarchy hier(h);
    if (!hier.acyclic()) throw MalformedDocument("cannot serialize '" + h.name() + "': containment is cyclic");
    std::map<StateId, std::vector<StateId>> children;
    std::vector<StateId> roots;
    for (const auto& s : h.states()) {
        const auto& parents = hier.parents(s);
        if (parents.size() > 1) {
            throw MalformedDocument("cannot serialize '" + h.name() + "': state '" + s.name +
                                    "' has more than one immediate parent");
        }
        if (parents.empty()) {
            roots.push_back(s);
        } else {
            children[*parents.begin()].push_back(s);
        }
    }

    std::ostringstream out;
    out << "hma " << h.name() << " {\n  messages {";
    bool first = true;
    for (const auto& m : h.messages()) {
        out << (first ? " " : ", ") << m.name;
        first = false;
    }
    out << " }\n";
    for (const auto& r : roots) write_state(out, r, children, h.initial(), 2);
    for (const auto& t : h.transitions()) {
        out << "  trans " << t.source.name << " -" << t.input.name << "/" << (t.output ? t.output->name : "") << "-> "
            << t.target.name << ";\n";
    }
    out << "}\n";
    return out.str();
}

std::string serialize_ma(const Ma& m) { return serialize_hma(embed(m)); }

std::string serialize_traces(const TraceSet& t) {
    std::ostringstream out;
    out << "#traces depth " << t.depth() << " alphabet";
    for (const auto& m : t.alphabet()) out << ' ' << m.name;
    out << '\n';
    for (const auto& trace : t.traces()) {
        write_side(out, trace.inputs);
        out << " / ";
        write_side(out, trace.outputs);
        out << '\n';
    }
    return out.str();
}

TraceSet parse_traces(std::string_view text, std::string_view file) {
    std::vector<ParseError> errors;
    std::istringstream lines{std::string(text)};
    std::string line;
    std::size_t number = 0;
    auto error = [&](const std::string& expected, const std::string& found) {
        errors.push_back({SourceSpan{std::string(file), number, 1, line.size()}, expected, found});
    };

    std::size_t depth = 0;
    std::set<Message> alphabet;
    bool header = false;
    if (std::getline(lines, line)) {
        ++number;
        std::istringstream words(line);
        std::string tag, depth_kw, depth_text, alphabet_kw;
        words >> tag >> depth_kw >> depth_text >> alphabet_kw;
        const bool digits = !depth_text.empty() && std::ranges::all_of(depth_text, [](char c) {
            return std::isdigit(static_cast<unsigned char>(c));
        });
        if (tag == "#traces" && depth_kw == "depth" && digits && depth_text.size() < 10 && alphabet_kw == "alphabet") {
            depth = std::stoul(depth_text);
            header = true;
            for (std::string m; words >> m;) {
                if (!is_valid_identifier(m)) error("message identifier", "'" + m + "'");
                alphabet.insert(Message{m});
            }
        } else {
            error("'#traces depth N alphabet ...'", "'" + line + "'");
        }
    } else {
        error("'#traces depth N alphabet ...'", "end of input");
    }

    std::set<Trace> traces;
    while (header && std::getline(lines, line)) {
        ++number;
        std::istringstream words(line);
        std::vector<std::string> tokens;
        for (std::string w; words >> w;) tokens.push_back(w);
        if (tokens.empty()) continue;
        const auto slash = std::ranges::find(tokens, "/");
        if (slash == tokens.end() || std::count(tokens.begin(), tokens.end(), "/") != 1) {
            error("trace line 'inputs / outputs'", "'" + line + "'");
            continue;
        }
        auto side = [&](auto from, auto to, std::vector<Message>& dest) {
            if (from == to) return false;
            if (std::distance(from, to) == 1 && *from == "-") return true;
            for (auto it = from; it != to; ++it) {
                if (!is_valid_identifier(*it)) return false;
                if (!alphabet.contains(Message{*it})) {
                    error("message of the alphabet", "unknown message '" + *it + "'");
                    return true;
                }
                dest.push_back(Message{*it});
            }
            return true;
        };
        Trace trace;
        if (!side(tokens.begin(), slash, trace.inputs) || !side(std::next(slash), tokens.end(), trace.outputs)) {
            error("trace line 'inputs / outputs'", "'" + line + "'");
            continue;
        }
        if (trace.inputs.size() > depth || trace.outputs.size() > trace.inputs.size()) {
            error("trace within depth with no more outputs than inputs", "'" + line + "'");
            continue;
        }
        traces.insert(std::move(trace));
    }

    if (!errors.empty()) throw ParseFailure(std::move(errors));
    return TraceSet(depth, std::move(alphabet), std::move(traces));
}

}  // namespace hma
