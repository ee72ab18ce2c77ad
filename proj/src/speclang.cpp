#include "epc/speclang.hpp"

#include <algorithm>
#include <cctype>
#include <map>
#include <set>
#include <sstream>

namespace epc::speclang {

namespace {

[[noreturn]] void syntax_error(int line, int col, const std::string& expected) {
    fail(ErrorKind::SyntaxError,
         "line " + std::to_string(line) + ", col " + std::to_string(col) + ": " + expected);
}

bool is_word_char(char c) {
    return std::isalnum(static_cast<unsigned char>(c)) || c == '_';
}

bool all_digits(const std::string& s) {
    return !s.empty() && std::all_of(s.begin(), s.end(), [](unsigned char c) {
        return std::isdigit(c);
    });
}

struct Tok {
    std::string text;
    int col;
};

struct Line {
    int number;
    std::string raw; // comment-stripped, trimmed
    std::vector<Tok> toks;
};

std::string strip_comment(const std::string& line) {
    // '#' opens a comment at line start or after whitespace; '#' inside a
    // trace literal is always preceded by '.'.
    for (size_t i = 0; i < line.size(); ++i) {
        if (line[i] == '#' && (i == 0 || std::isspace(static_cast<unsigned char>(line[i - 1]))))
            return line.substr(0, i);
    }
    return line;
}

std::string trim(const std::string& s) {
    size_t a = s.find_first_not_of(" \t\r");
    if (a == std::string::npos) return {};
    size_t b = s.find_last_not_of(" \t\r");
    return s.substr(a, b - a + 1);
}

std::vector<Tok> lex(const std::string& text, int lineno) {
    std::vector<Tok> toks;
    size_t i = 0;
    while (i < text.size()) {
        char c = text[i];
        if (std::isspace(static_cast<unsigned char>(c))) {
            ++i;
            continue;
        }
        int col = static_cast<int>(i) + 1;
        if (is_word_char(c)) {
            size_t j = i;
            while (j < text.size() && is_word_char(text[j])) ++j;
            toks.push_back({text.substr(i, j - i), col});
            i = j;
        } else if (c == '=' && i + 1 < text.size() && text[i + 1] == '=') {
            toks.push_back({"==", col});
            i += 2;
        } else if (c == '.' && i + 1 < text.size() && text[i + 1] == '.') {
            toks.push_back({"..", col});
            i += 2;
        } else if (std::string("{}()=:,").find(c) != std::string::npos) {
            toks.push_back({std::string(1, c), col});
            ++i;
        } else {
            syntax_error(lineno, col, std::string("unexpected character '") + c + "'");
        }
    }
    return toks;
}

// Cursor over the tokens of one line.
class Toks {
public:
    Toks(const Line& line) : line_(line) {}

    bool done() const { return pos_ >= line_.toks.size(); }
    const Tok& peek() const {
        if (done()) syntax_error(line_.number, last_col(), "unexpected end of line");
        return line_.toks[pos_];
    }
    Tok next() {
        const Tok& t = peek();
        ++pos_;
        return t;
    }
    Tok expect(const std::string& text) {
        if (done() || peek().text != text)
            syntax_error(line_.number, done() ? last_col() : peek().col,
                         "expected '" + text + "'");
        return next();
    }
    bool accept(const std::string& text) {
        if (!done() && peek().text == text) {
            ++pos_;
            return true;
        }
        return false;
    }
    Tok word(const std::string& what) {
        if (done() || !is_word_char(peek().text[0]))
            syntax_error(line_.number, done() ? last_col() : peek().col, "expected " + what);
        return next();
    }
    void end() {
        if (!done()) syntax_error(line_.number, peek().col, "unexpected trailing tokens");
    }
    int lineno() const { return line_.number; }

private:
    int last_col() const {
        return line_.toks.empty() ? 1 : line_.toks.back().col + 1;
    }
    const Line& line_;
    size_t pos_ = 0;
};

class Parser {
public:
    explicit Parser(const std::string& text) {
        std::istringstream in(text);
        std::string raw;
        int n = 0;
        while (std::getline(in, raw)) {
            ++n;
            std::string stripped = trim(strip_comment(raw));
            if (stripped.empty()) continue;
            lines_.push_back({n, stripped, {}});
        }
    }

    SpecModel parse() {
        while (idx_ < lines_.size()) {
            Line& line = lines_[idx_];
            line.toks = lex(line.raw, line.number);
            Toks t(line);
            std::string kw = t.word("a declaration keyword").text;
            if (kw == "domain") parse_domain(t);
            else if (kw == "system") parse_system(t);
            else if (kw == "universe") parse_universe(t);
            else if (kw == "subject") parse_subject(t);
            else if (kw == "attacker") parse_attacker(t);
            else if (kw == "policy") parse_policy(t);
            else
                syntax_error(line.number, 1, "unknown declaration '" + kw + "'");
        }
        finish_checks();
        return std::move(model_);
    }

private:
    std::vector<Line> lines_;
    size_t idx_ = 0;
    SpecModel model_;

    Line& advance_lexed() {
        if (idx_ >= lines_.size())
            fail(ErrorKind::SyntaxError, "unexpected end of file (unclosed block)");
        Line& line = lines_[idx_];
        line.toks = lex(line.raw, line.number);
        return line;
    }

    // raw line inside a traces/universe block
    const Line& advance_raw() {
        if (idx_ >= lines_.size())
            fail(ErrorKind::SyntaxError, "unexpected end of file (unclosed trace block)");
        return lines_[idx_];
    }

    void check_fresh(const std::string& category, const std::string& name) {
        auto dup = [&](const auto& vec) {
            return std::any_of(vec.begin(), vec.end(),
                               [&](const auto& kv) { return kv.first == name; });
        };
        bool taken = category == "domain"     ? dup(model_.domains)
                     : category == "system"   ? dup(model_.systems)
                     : category == "attacker" ? dup(model_.attackers)
                                              : dup(model_.policies);
        if (taken) fail(ErrorKind::DuplicateName, category + " '" + name + "' declared twice");
    }

    const std::vector<Value>& lookup_domain(const std::string& name, int line) {
        for (const auto& [n, values] : model_.domains)
            if (n == name) return values;
        fail(ErrorKind::UnknownName,
             "domain '" + name + "' (line " + std::to_string(line) + ") is not declared");
    }

    SystemDef* find_system(const std::string& name) {
        for (auto& [n, def] : model_.systems)
            if (n == name) return &def;
        return nullptr;
    }

    // domain NAME = LO..HI  |  domain NAME = { tok tok ... }
    void parse_domain(Toks& t) {
        std::string name = t.word("a domain name").text;
        check_fresh("domain", name);
        t.expect("=");
        std::vector<Value> values;
        if (t.accept("{")) {
            while (!t.accept("}")) values.push_back(t.word("a domain value").text);
            t.end();
        } else {
            Tok lo = t.word("a range bound");
            t.expect("..");
            Tok hi = t.word("a range bound");
            t.end();
            if (!all_digits(lo.text) || !all_digits(hi.text) || lo.text.size() != hi.text.size())
                syntax_error(t.lineno(), lo.col, "range bounds must be digits of equal width");
            long a = std::stol(lo.text), b = std::stol(hi.text);
            if (a > b) syntax_error(t.lineno(), lo.col, "empty range");
            size_t width = lo.text.size();
            for (long v = a; v <= b; ++v) {
                std::string s = std::to_string(v);
                values.push_back(std::string(width - s.size(), '0') + s);
            }
        }
        if (values.empty())
            fail(ErrorKind::EmptyDomain, "domain '" + name + "' has no values");
        model_.domains.emplace_back(name, std::move(values));
        ++idx_;
    }

    // system NAME {  |  system NAME traces {
    void parse_system(Toks& t) {
        std::string name = t.word("a system name").text;
        check_fresh("system", name);
        SystemDef def;
        if (t.accept("traces")) {
            def.explicit_traces = true;
            t.expect("{");
            t.end();
            ++idx_;
            while (true) {
                const Line& line = advance_raw();
                if (line.raw == "}") {
                    ++idx_;
                    break;
                }
                core::parse_trace(line.raw); // validate now, at the declaration site
                def.trace_literals.push_back(line.raw);
                ++idx_;
            }
        } else {
            t.expect("{");
            t.end();
            ++idx_;
            def.process.body = parse_block();
        }
        model_.systems.emplace_back(name, std::move(def));
    }

    // universe NAME {  ...trace literals... }
    void parse_universe(Toks& t) {
        std::string name = t.word("a system name").text;
        SystemDef* def = find_system(name);
        if (!def)
            fail(ErrorKind::UnknownName, "universe for undeclared system '" + name + "'");
        t.expect("{");
        t.end();
        ++idx_;
        while (true) {
            const Line& line = advance_raw();
            if (line.raw == "}") {
                ++idx_;
                break;
            }
            core::parse_trace(line.raw);
            def->universe_literals.push_back(line.raw);
            ++idx_;
        }
    }

    // subject NAME = first_input | input on CHANNEL | input K | const VALUE
    void parse_subject(Toks& t) {
        std::string name = t.word("a system name").text;
        SystemDef* def = find_system(name);
        if (!def)
            fail(ErrorKind::UnknownName, "subject for undeclared system '" + name + "'");
        t.expect("=");
        Tok sel = t.word("a subject selector");
        if (sel.text == "first_input") {
            def->subject = SubjectFn::first_input();
            def->subject_source = "first_input";
        } else if (sel.text == "input") {
            Tok arg = t.word("'on <channel>' or an index");
            if (arg.text == "on") {
                std::string channel = t.word("a channel name").text;
                def->subject = SubjectFn::first_input_on_channel(channel);
                def->subject_source = "input on " + channel;
            } else {
                if (!all_digits(arg.text))
                    syntax_error(t.lineno(), arg.col, "expected an input index");
                def->subject = SubjectFn::kth_input(std::stoi(arg.text));
                def->subject_source = "input " + arg.text;
            }
        } else if (sel.text == "const") {
            std::string v = t.word("a value").text;
            def->subject = SubjectFn::constant(v);
            def->subject_source = "const " + v;
        } else {
            syntax_error(t.lineno(), sel.col, "unknown subject selector '" + sel.text + "'");
        }
        t.end();
        def->subject_declared = true;
        ++idx_;
    }

    // ---- process bodies -------------------------------------------------

    // Parses statements until the closing '}' of the current block.
    Block parse_block() {
        Block block;
        while (true) {
            Line& line = advance_lexed();
            Toks t(line);
            if (t.accept("}")) {
                t.end();
                ++idx_;
                return block;
            }
            block.push_back(parse_stmt(t));
        }
    }

    Stmt parse_stmt(Toks& t) {
        Stmt stmt;
        stmt.line = t.lineno();
        Tok kw = t.word("a statement");
        if (kw.text == "input") {
            InputStmt s;
            s.var = t.word("a variable").text;
            t.expect(":");
            s.domain = t.word("a domain name").text;
            lookup_domain(s.domain, t.lineno());
            t.end();
            stmt.node = std::move(s);
            ++idx_;
        } else if (kw.text == "output") {
            OutputStmt s;
            s.channel = t.word("a channel").text;
            t.expect("=");
            s.expr = parse_expr(t);
            t.end();
            stmt.node = std::move(s);
            ++idx_;
        } else if (kw.text == "signal") {
            SignalStmt s;
            s.name = t.word("a signal name").text;
            t.end();
            stmt.node = std::move(s);
            ++idx_;
        } else if (kw.text == "let") {
            LetStmt s;
            s.var = t.word("a variable").text;
            t.expect("=");
            s.expr = parse_expr(t);
            t.end();
            stmt.node = std::move(s);
            ++idx_;
        } else if (kw.text == "if") {
            IfStmt s;
            s.cond = parse_cond(t);
            t.expect("{");
            t.end();
            ++idx_;
            s.then_block = parse_block();
            // optional: else {
            if (idx_ < lines_.size()) {
                Line& line = advance_lexed();
                Toks e(line);
                if (e.accept("else")) {
                    e.expect("{");
                    e.end();
                    ++idx_;
                    s.else_block = parse_block();
                }
            }
            stmt.node = std::move(s);
        } else {
            syntax_error(t.lineno(), kw.col, "unknown statement '" + kw.text + "'");
        }
        return stmt;
    }

    Expr parse_expr(Toks& t) {
        Expr e;
        e.line = t.lineno();
        Tok head = t.word("an expression");
        if (!t.accept("(")) {
            e.node = TokenExpr{head.text};
            return e;
        }
        CallExpr call;
        call.fn = head.text;
        if (call.fn == "lastk") {
            call.args.push_back(parse_expr(t));
            t.expect(",");
            Tok k = t.word("a digit count");
            if (!all_digits(k.text)) syntax_error(t.lineno(), k.col, "expected a digit count");
            call.int_arg = std::stoi(k.text);
        } else if (call.fn == "xor") {
            call.args.push_back(parse_expr(t));
            t.expect(",");
            call.args.push_back(parse_expr(t));
        } else {
            syntax_error(t.lineno(), head.col, "unknown function '" + call.fn + "'");
        }
        t.expect(")");
        e.node = std::move(call);
        return e;
    }

    Cond parse_cond(Toks& t) {
        Cond c;
        c.line = t.lineno();
        c.lhs = parse_expr(t);
        if (t.accept("==")) {
            c.kind = Cond::Kind::Eq;
            c.rhs = parse_expr(t);
        } else if (t.accept("in")) {
            c.kind = Cond::Kind::In;
            c.domain = t.word("a domain name").text;
            lookup_domain(c.domain, t.lineno());
        } else {
            syntax_error(t.lineno(), t.done() ? 1 : t.peek().col, "expected '==' or 'in'");
        }
        return c;
    }

    // ---- attackers ------------------------------------------------------

    void parse_attacker(Toks& t) {
        std::string name = t.word("an attacker name").text;
        check_fresh("attacker", name);
        t.expect("=");
        ObsSpec spec = parse_obs(t);
        t.end();
        model_.attackers.emplace_back(name, std::move(spec));
        ++idx_;
    }

    ObsSpec parse_obs(Toks& t) {
        ObsSpec spec;
        Tok head = t.word("an observation spec");
        if (head.text == "all") {
            spec.kind = ObsSpec::Kind::All;
        } else if (head.text == "none") {
            spec.kind = ObsSpec::Kind::None;
        } else if (head.text == "after_signal") {
            spec.kind = ObsSpec::Kind::AfterSignal;
            t.expect("(");
            spec.signal = t.word("a signal name").text;
            t.expect(")");
        } else if (head.text == "channels") {
            spec.kind = ObsSpec::Kind::Channels;
            t.expect("(");
            spec.channels.push_back(t.word("a channel").text);
            while (t.accept(",")) spec.channels.push_back(t.word("a channel").text);
            t.expect(")");
        } else if (head.text == "compose") {
            spec.kind = ObsSpec::Kind::Compose;
            t.expect("(");
            spec.parts.push_back(parse_obs(t));
            while (t.accept(",")) spec.parts.push_back(parse_obs(t));
            t.expect(")");
        } else {
            syntax_error(t.lineno(), head.col, "unknown observation spec '" + head.text + "'");
        }
        return spec;
    }

    // ---- classifiers ----------------------------------------------------

    ClassifierExpr parse_classifier(Toks& t) {
        ClassifierExpr c;
        c.line = t.lineno();
        Tok head = t.word("a classifier");
        if (head.text == "const") {
            c.kind = ClassifierExpr::Kind::Constant;
        } else if (head.text == "identity") {
            c.kind = ClassifierExpr::Kind::Identity;
        } else if (head.text == "lastk") {
            c.kind = ClassifierExpr::Kind::LastK;
            t.expect("(");
            Tok k = t.word("a digit count");
            if (!all_digits(k.text)) syntax_error(t.lineno(), k.col, "expected a digit count");
            c.k = std::stoi(k.text);
            t.expect(")");
        } else if (head.text == "in") {
            c.kind = ClassifierExpr::Kind::InSet;
            t.expect("(");
            c.name = t.word("a domain name").text;
            lookup_domain(c.name, t.lineno());
            t.expect(")");
        } else if (head.text == "eq") {
            c.kind = ClassifierExpr::Kind::EqLit;
            t.expect("(");
            c.literal = t.word("a literal").text;
            t.expect(")");
        } else if (head.text == "kth_input") {
            c.kind = ClassifierExpr::Kind::KthInput;
            t.expect("(");
            Tok k = t.word("an input index");
            if (!all_digits(k.text)) syntax_error(t.lineno(), k.col, "expected an input index");
            c.k = std::stoi(k.text);
            t.expect(")");
        } else if (head.text == "contains_input") {
            c.kind = ClassifierExpr::Kind::ContainsInput;
            t.expect("(");
            c.name = t.word("a channel").text;
            t.expect(",");
            c.literal = t.word("a literal").text;
            t.expect(")");
        } else if (head.text == "pair") {
            c.kind = ClassifierExpr::Kind::Pair;
            t.expect("(");
            c.parts.push_back(parse_classifier(t));
            t.expect(",");
            c.parts.push_back(parse_classifier(t));
            t.expect(")");
        } else {
            syntax_error(t.lineno(), head.col, "unknown classifier '" + head.text + "'");
        }
        return c;
    }

    // ---- policies -------------------------------------------------------

    void parse_policy(Toks& t) {
        std::string name = t.word("a policy name").text;
        check_fresh("policy", name);
        t.expect("=");
        Tok kind = t.word("a policy type");
        PolicyDef def;
        if (kind.text == "type0") {
            Type0Def d;
            d.domain = t.word("a domain name").text;
            lookup_domain(d.domain, t.lineno());
            d.classifier = parse_classifier(t);
            t.end();
            def.node = std::move(d);
            ++idx_;
        } else if (kind.text == "type1") {
            Type1Def d;
            d.domain = t.word("a domain name").text;
            lookup_domain(d.domain, t.lineno());
            t.expect("by");
            d.condition = parse_classifier(t);
            t.expect("{");
            t.end();
            ++idx_;
            d.cases = parse_type1_cases();
            def.node = std::move(d);
        } else if (kind.text == "type2") {
            Type2Def d;
            d.domain = t.word("a domain name").text;
            lookup_domain(d.domain, t.lineno());
            t.expect("by");
            d.cases = parse_classifier(t);
            t.expect("{");
            t.end();
            ++idx_;
            while (true) {
                Line& line = advance_lexed();
                Toks e(line);
                if (e.accept("}")) {
                    e.end();
                    ++idx_;
                    break;
                }
                std::string label = e.word("a case label").text;
                e.expect(":");
                e.expect("type1");
                e.expect("by");
                Type1Def sub;
                sub.condition = parse_classifier(e);
                e.expect("{");
                e.end();
                ++idx_;
                sub.cases = parse_type1_cases();
                d.sub.emplace_back(label, std::move(sub));
            }
            def.node = std::move(d);
        } else {
            syntax_error(t.lineno(), kind.col, "expected type0, type1 or type2");
        }
        model_.policies.emplace_back(name, std::move(def));
    }

    std::vector<std::pair<std::string, ClassifierExpr>> parse_type1_cases() {
        std::vector<std::pair<std::string, ClassifierExpr>> cases;
        while (true) {
            Line& line = advance_lexed();
            Toks t(line);
            if (t.accept("}")) {
                t.end();
                ++idx_;
                return cases;
            }
            std::string label = t.word("a case label").text;
            t.expect(":");
            cases.emplace_back(label, parse_classifier(t));
            t.end();
            ++idx_;
        }
    }

    void finish_checks() {
        for (const auto& [name, def] : model_.systems) {
            if (def.explicit_traces && def.trace_literals.empty())
                fail(ErrorKind::EmptyDomain, "system '" + name + "' has no traces");
        }
    }
};

} // namespace

const std::vector<Value>& SpecModel::domain(const std::string& name) const {
    for (const auto& [n, v] : domains)
        if (n == name) return v;
    fail(ErrorKind::UnknownName, "domain '" + name + "' is not declared");
}

bool SpecModel::has_domain(const std::string& name) const {
    for (const auto& [n, v] : domains)
        if (n == name) return true;
    return false;
}

const SystemDef& SpecModel::system(const std::string& name) const {
    for (const auto& [n, d] : systems)
        if (n == name) return d;
    fail(ErrorKind::UnknownName, "system '" + name + "' is not declared");
}

const ObsSpec& SpecModel::attacker(const std::string& name) const {
    for (const auto& [n, d] : attackers)
        if (n == name) return d;
    fail(ErrorKind::UnknownName, "attacker '" + name + "' is not declared");
}

const PolicyDef& SpecModel::policy(const std::string& name) const {
    for (const auto& [n, d] : policies)
        if (n == name) return d;
    fail(ErrorKind::UnknownName, "policy '" + name + "' is not declared");
}

SpecModel parse_spec(const std::string& text) {
    return Parser(text).parse();
}

// ---------------------------------------------------------------------------
// Evaluation

namespace {

using Env = std::map<std::string, Value>;

Value eval_expr(const Expr& e, const Env& env) {
    if (const auto* tok = std::get_if<TokenExpr>(&e.node)) {
        auto it = env.find(tok->text);
        return it != env.end() ? it->second : tok->text;
    }
    const auto& call = std::get<CallExpr>(e.node);
    if (call.fn == "lastk") {
        Value v = eval_expr(call.args[0], env);
        if (static_cast<size_t>(call.int_arg) > v.size())
            fail(ErrorKind::ExprError, "lastk(" + std::to_string(call.int_arg) +
                                           ") wider than value '" + v + "'");
        return v.substr(v.size() - call.int_arg);
    }
    // xor
    Value a = eval_expr(call.args[0], env);
    Value b = eval_expr(call.args[1], env);
    if (!all_digits(a) || !all_digits(b))
        fail(ErrorKind::ExprError, "xor over non-numeric values '" + a + "', '" + b + "'");
    long r = std::stol(a) ^ std::stol(b);
    size_t width = std::max(a.size(), b.size());
    std::string s = std::to_string(r);
    return s.size() >= width ? s : std::string(width - s.size(), '0') + s;
}

bool eval_cond(const Cond& c, const Env& env, const SpecModel& model) {
    Value lhs = eval_expr(c.lhs, env);
    if (c.kind == Cond::Kind::Eq) return lhs == eval_expr(c.rhs, env);
    const auto& values = model.domain(c.domain);
    return std::find(values.begin(), values.end(), lhs) != values.end();
}

struct Frame {
    const Block* block;
    size_t index;
};

void expand(std::vector<Frame> stack, Env env, std::vector<core::Event> prefix,
            const SpecModel& model, TraceSet& out) {
    while (!stack.empty()) {
        Frame& top = stack.back();
        if (top.index >= top.block->size()) {
            stack.pop_back();
            continue;
        }
        const Stmt& stmt = (*top.block)[top.index++];
        if (const auto* in = std::get_if<InputStmt>(&stmt.node)) {
            // branch over every value of the input domain, in declared order
            for (const Value& v : model.domain(in->domain)) {
                Env env2 = env;
                env2[in->var] = v;
                auto prefix2 = prefix;
                prefix2.push_back(core::input_event(in->var, v));
                expand(stack, std::move(env2), std::move(prefix2), model, out);
            }
            return;
        } else if (const auto* o = std::get_if<OutputStmt>(&stmt.node)) {
            prefix.push_back(core::output_event(o->channel, eval_expr(o->expr, env)));
        } else if (const auto* sig = std::get_if<SignalStmt>(&stmt.node)) {
            prefix.push_back(core::signal_event(sig->name));
        } else if (const auto* let = std::get_if<LetStmt>(&stmt.node)) {
            env[let->var] = eval_expr(let->expr, env);
        } else if (const auto* br = std::get_if<IfStmt>(&stmt.node)) {
            const Block& taken =
                eval_cond(br->cond, env, model) ? br->then_block : br->else_block;
            if (!taken.empty()) stack.push_back({&taken, 0});
        }
    }
    out.insert(core::Trace{std::move(prefix)});
}

} // namespace

TraceSet expand_process(const ProcessDef& p, const SpecModel& model) {
    TraceSet out;
    expand({{&p.body, 0}}, {}, {}, model, out);
    return out;
}

System build_system(const SpecModel& model, const std::string& name) {
    const SystemDef& def = model.system(name);
    TraceSet traces;
    if (def.explicit_traces) {
        for (const std::string& lit : def.trace_literals) traces.insert(core::parse_trace(lit));
    } else {
        traces = expand_process(def.process, model);
    }
    TraceSet universe = traces;
    for (const std::string& lit : def.universe_literals) universe.insert(core::parse_trace(lit));
    return System(std::move(universe), std::move(traces), def.subject);
}

// ---------------------------------------------------------------------------
// Attackers

namespace {

constexpr const char* kAbsentToken = "#absent#";

std::string observe(const ObsSpec& spec, const Trace& t) {
    switch (spec.kind) {
    case ObsSpec::Kind::All:
        return core::render_trace(t);
    case ObsSpec::Kind::None:
        return {};
    case ObsSpec::Kind::AfterSignal: {
        for (size_t i = 0; i < t.events.size(); ++i) {
            const core::Event& e = t.events[i];
            if (e.kind == core::EventKind::Signal && e.channel == spec.signal) {
                Trace suffix{{t.events.begin() + i + 1, t.events.end()}};
                return core::render_trace(suffix);
            }
        }
        // No marker: all such traces are mutually equivalent and distinct
        // from every marker-bearing trace.
        return kAbsentToken;
    }
    case ObsSpec::Kind::Channels: {
        Trace sub;
        for (const core::Event& e : t.events)
            if (std::find(spec.channels.begin(), spec.channels.end(), e.channel) !=
                spec.channels.end())
                sub.events.push_back(e);
        return core::render_trace(sub);
    }
    case ObsSpec::Kind::Compose: {
        std::string out;
        for (size_t i = 0; i < spec.parts.size(); ++i) {
            if (i) out += '|';
            out += observe(spec.parts[i], t);
        }
        return out;
    }
    }
    return {};
}

void validate_signals(const ObsSpec& spec, const std::set<std::string>& signals) {
    if (spec.kind == ObsSpec::Kind::AfterSignal && !signals.count(spec.signal))
        fail(ErrorKind::UnknownSignal,
             "signal '" + spec.signal + "' does not occur in the universe");
    for (const ObsSpec& part : spec.parts) validate_signals(part, signals);
}

} // namespace

kspace::Attacker build_attacker(const SpecModel& model, const std::string& name,
                                const TraceSet& universe) {
    ObsSpec spec = model.attacker(name);
    std::set<std::string> signals;
    for (const Trace& t : universe)
        for (const core::Event& e : t.events)
            if (e.kind == core::EventKind::Signal) signals.insert(e.channel);
    validate_signals(spec, signals);
    return kspace::Attacker(name,
                            [spec](const Trace& t) { return observe(spec, t); });
}

// ---------------------------------------------------------------------------
// Classifiers and policies

std::string eval_classifier(const ClassifierExpr& c, const std::string& element,
                            const SpecModel& model) {
    switch (c.kind) {
    case ClassifierExpr::Kind::Constant:
        return "_";
    case ClassifierExpr::Kind::Identity:
        return element;
    case ClassifierExpr::Kind::LastK: {
        if (static_cast<size_t>(c.k) > element.size())
            fail(ErrorKind::ExprError,
                 "lastk(" + std::to_string(c.k) + ") wider than value '" + element + "'");
        return element.substr(element.size() - c.k);
    }
    case ClassifierExpr::Kind::InSet: {
        const auto& values = model.domain(c.name);
        bool in = std::find(values.begin(), values.end(), element) != values.end();
        return in ? "true" : "false";
    }
    case ClassifierExpr::Kind::EqLit:
        return element == c.literal ? "true" : "false";
    case ClassifierExpr::Kind::KthInput: {
        Trace t = core::parse_trace(element);
        int seen = 0;
        for (const core::Event& e : t.events)
            if (e.kind == core::EventKind::Input && ++seen == c.k) return e.value;
        fail(ErrorKind::ExprError,
             "trace '" + element + "' has no input #" + std::to_string(c.k));
    }
    case ClassifierExpr::Kind::ContainsInput: {
        Trace t = core::parse_trace(element);
        for (const core::Event& e : t.events)
            if (e.kind == core::EventKind::Input && e.channel == c.name &&
                e.value == c.literal)
                return "true";
        return "false";
    }
    case ClassifierExpr::Kind::Pair:
        return "(" + eval_classifier(c.parts[0], element, model) + "," +
               eval_classifier(c.parts[1], element, model) + ")";
    }
    return {};
}

partitions::Partition relation_from_classifier(const ClassifierExpr& c, const ValueSet& carrier,
                                               const SpecModel& model) {
    return partitions::Partition::from_classifier(
        carrier, [&](const std::string& v) { return eval_classifier(c, v, model); });
}

namespace {

// Partition of `carrier` by classifier fibers, plus the label of each block
// in the partition's canonical block order.
std::pair<partitions::Partition, std::vector<std::string>>
labelled_partition(const ClassifierExpr& c, const std::set<std::string>& carrier,
                   const SpecModel& model) {
    partitions::Partition p = partitions::Partition::from_classifier(
        carrier, [&](const std::string& v) { return eval_classifier(c, v, model); });
    std::vector<std::string> labels;
    for (const auto& block : p.blocks())
        labels.push_back(eval_classifier(c, block.front(), model));
    return {std::move(p), std::move(labels)};
}

const ClassifierExpr* find_case(const std::vector<std::pair<std::string, ClassifierExpr>>& cases,
                                const std::string& label) {
    for (const auto& [l, c] : cases)
        if (l == label) return &c;
    for (const auto& [l, c] : cases)
        if (l == "_") return &c;
    return nullptr;
}

policy::Type1Policy instantiate_type1_over(const SpecModel& model, const Type1Def& def,
                                           const TraceSet& universe_v, const ValueSet& domain) {
    std::set<std::string> carrier;
    for (const Trace& t : universe_v) carrier.insert(core::render_trace(t));
    if (carrier.empty())
        fail(ErrorKind::EmptySystem, "type1 condition over an empty trace carrier");
    auto [condition, labels] = labelled_partition(def.condition, carrier, model);
    policy::Type1Policy p;
    p.condition = std::move(condition);
    p.labels = labels;
    for (const std::string& label : labels) {
        const ClassifierExpr* c = find_case(def.cases, label);
        if (!c)
            fail(ErrorKind::MissingCaseLabel,
                 "no policy mapping for condition block '" + label + "'");
        p.relations.push_back(relation_from_classifier(*c, domain, model));
    }
    return p;
}

} // namespace

policy::Type0Policy instantiate_type0(const SpecModel& model, const Type0Def& def,
                                      const ValueSet& domain) {
    return policy::Type0Policy{relation_from_classifier(def.classifier, domain, model)};
}

policy::Type1Policy instantiate_type1(const SpecModel& model, const Type1Def& def,
                                      const System& s) {
    ValueSet domain = core::subject_domain(s);
    TraceSet universe_v = core::restrict_universe(s.universe, s.subject, domain);
    return instantiate_type1_over(model, def, universe_v, domain);
}

policy::Type2Policy instantiate_type2(const SpecModel& model, const Type2Def& def,
                                      const System& s) {
    ValueSet domain = core::subject_domain(s);
    auto [cases, labels] = labelled_partition(def.cases, domain, model);
    policy::Type2Policy p;
    p.cases = std::move(cases);
    p.labels = labels;
    for (size_t i = 0; i < p.cases.block_count(); ++i) {
        const auto& block = p.cases.blocks()[i];
        ValueSet w(block.begin(), block.end());
        const Type1Def* sub = nullptr;
        for (const auto& [l, d] : def.sub)
            if (l == labels[i]) sub = &d;
        if (!sub)
            for (const auto& [l, d] : def.sub)
                if (l == "_") sub = &d;
        if (!sub)
            fail(ErrorKind::MissingCaseLabel, "no sub-policy for case '" + labels[i] + "'");
        TraceSet universe_w = core::restrict_universe(s.universe, s.subject, w);
        p.sub_policies.push_back(instantiate_type1_over(model, *sub, universe_w, w));
    }
    return p;
}

partitions::Partition bound_of_policy(const SpecModel& model, const std::string& name) {
    const PolicyDef& def = model.policy(name);
    if (const auto* t0 = std::get_if<Type0Def>(&def.node)) {
        const auto& values = model.domain(t0->domain);
        return relation_from_classifier(t0->classifier, ValueSet(values.begin(), values.end()),
                                        model);
    }
    if (const auto* t1 = std::get_if<Type1Def>(&def.node)) {
        const auto& values = model.domain(t1->domain);
        ValueSet domain(values.begin(), values.end());
        std::vector<partitions::Partition> rels;
        for (const auto& [_, c] : t1->cases)
            rels.push_back(relation_from_classifier(c, domain, model));
        return partitions::Partition::meet(std::span<const partitions::Partition>(rels));
    }
    const auto& t2 = std::get<Type2Def>(def.node);
    const auto& values = model.domain(t2.domain);
    ValueSet domain(values.begin(), values.end());
    auto [cases, labels] = labelled_partition(t2.cases, domain, model);
    std::vector<partitions::Partition> parts;
    parts.push_back(cases);
    for (size_t i = 0; i < cases.block_count(); ++i) {
        const auto& block = cases.blocks()[i];
        ValueSet w(block.begin(), block.end());
        const Type1Def* sub = nullptr;
        for (const auto& [l, d] : t2.sub)
            if (l == labels[i]) sub = &d;
        if (!sub)
            for (const auto& [l, d] : t2.sub)
                if (l == "_") sub = &d;
        if (!sub)
            fail(ErrorKind::MissingCaseLabel, "no sub-policy for case '" + labels[i] + "'");
        std::vector<partitions::Partition> rels;
        for (const auto& [_, c] : sub->cases)
            rels.push_back(relation_from_classifier(c, w, model));
        parts.push_back(partitions::Partition::meet(std::span<const partitions::Partition>(rels))
                            .dagger(domain));
    }
    return partitions::Partition::meet(std::span<const partitions::Partition>(parts));
}

// ---------------------------------------------------------------------------
// Printing

namespace {

std::string print_classifier(const ClassifierExpr& c) {
    using K = ClassifierExpr::Kind;
    switch (c.kind) {
    case K::Constant: return "const";
    case K::Identity: return "identity";
    case K::LastK: return "lastk(" + std::to_string(c.k) + ")";
    case K::InSet: return "in(" + c.name + ")";
    case K::EqLit: return "eq(" + c.literal + ")";
    case K::KthInput: return "kth_input(" + std::to_string(c.k) + ")";
    case K::ContainsInput: return "contains_input(" + c.name + "," + c.literal + ")";
    case K::Pair: return "pair(" + print_classifier(c.parts[0]) + "," +
                         print_classifier(c.parts[1]) + ")";
    }
    return {};
}

std::string print_obs(const ObsSpec& spec) {
    using K = ObsSpec::Kind;
    switch (spec.kind) {
    case K::All: return "all";
    case K::None: return "none";
    case K::AfterSignal: return "after_signal(" + spec.signal + ")";
    case K::Channels: {
        std::string out = "channels(";
        for (size_t i = 0; i < spec.channels.size(); ++i) {
            if (i) out += ",";
            out += spec.channels[i];
        }
        return out + ")";
    }
    case K::Compose: {
        std::string out = "compose(";
        for (size_t i = 0; i < spec.parts.size(); ++i) {
            if (i) out += ",";
            out += print_obs(spec.parts[i]);
        }
        return out + ")";
    }
    }
    return {};
}

std::string print_expr(const Expr& e) {
    if (const auto* tok = std::get_if<TokenExpr>(&e.node)) return tok->text;
    const auto& call = std::get<CallExpr>(e.node);
    if (call.fn == "lastk")
        return "lastk(" + print_expr(call.args[0]) + "," + std::to_string(call.int_arg) + ")";
    return "xor(" + print_expr(call.args[0]) + "," + print_expr(call.args[1]) + ")";
}

std::string print_cond(const Cond& c) {
    if (c.kind == Cond::Kind::Eq) return print_expr(c.lhs) + " == " + print_expr(c.rhs);
    return print_expr(c.lhs) + " in " + c.domain;
}

void print_block(std::string& out, const Block& block, int depth) {
    std::string pad(static_cast<size_t>(depth) * 2, ' ');
    for (const Stmt& stmt : block) {
        if (const auto* in = std::get_if<InputStmt>(&stmt.node)) {
            out += pad + "input " + in->var + " : " + in->domain + "\n";
        } else if (const auto* o = std::get_if<OutputStmt>(&stmt.node)) {
            out += pad + "output " + o->channel + " = " + print_expr(o->expr) + "\n";
        } else if (const auto* sig = std::get_if<SignalStmt>(&stmt.node)) {
            out += pad + "signal " + sig->name + "\n";
        } else if (const auto* let = std::get_if<LetStmt>(&stmt.node)) {
            out += pad + "let " + let->var + " = " + print_expr(let->expr) + "\n";
        } else if (const auto* br = std::get_if<IfStmt>(&stmt.node)) {
            out += pad + "if " + print_cond(br->cond) + " {\n";
            print_block(out, br->then_block, depth + 1);
            out += pad + "}\n";
            if (!br->else_block.empty()) {
                out += pad + "else {\n";
                print_block(out, br->else_block, depth + 1);
                out += pad + "}\n";
            }
        }
    }
}

void print_type1_cases(std::string& out,
                       const std::vector<std::pair<std::string, ClassifierExpr>>& cases,
                       int depth) {
    std::string pad(static_cast<size_t>(depth) * 2, ' ');
    for (const auto& [label, c] : cases)
        out += pad + label + " : " + print_classifier(c) + "\n";
}

} // namespace

std::string print_spec(const SpecModel& m) {
    std::string out;
    for (const auto& [name, values] : m.domains) {
        out += "domain " + name + " = {";
        for (const auto& v : values) out += " " + v;
        out += " }\n";
    }
    for (const auto& [name, def] : m.systems) {
        if (def.explicit_traces) {
            out += "system " + name + " traces {\n";
            for (const auto& lit : def.trace_literals) out += "  " + lit + "\n";
            out += "}\n";
        } else {
            out += "system " + name + " {\n";
            print_block(out, def.process.body, 1);
            out += "}\n";
        }
        if (!def.universe_literals.empty()) {
            out += "universe " + name + " {\n";
            for (const auto& lit : def.universe_literals) out += "  " + lit + "\n";
            out += "}\n";
        }
        if (def.subject_declared)
            out += "subject " + name + " = " + def.subject_source + "\n";
    }
    for (const auto& [name, spec] : m.attackers)
        out += "attacker " + name + " = " + print_obs(spec) + "\n";
    for (const auto& [name, def] : m.policies) {
        if (const auto* t0 = std::get_if<Type0Def>(&def.node)) {
            out += "policy " + name + " = type0 " + t0->domain + " " +
                   print_classifier(t0->classifier) + "\n";
        } else if (const auto* t1 = std::get_if<Type1Def>(&def.node)) {
            out += "policy " + name + " = type1 " + t1->domain + " by " +
                   print_classifier(t1->condition) + " {\n";
            print_type1_cases(out, t1->cases, 1);
            out += "}\n";
        } else {
            const auto& t2 = std::get<Type2Def>(def.node);
            out += "policy " + name + " = type2 " + t2.domain + " by " +
                   print_classifier(t2.cases) + " {\n";
            for (const auto& [label, sub] : t2.sub) {
                out += "  " + label + " : type1 by " + print_classifier(sub.condition) + " {\n";
                print_type1_cases(out, sub.cases, 2);
                out += "  }\n";
            }
            out += "}\n";
        }
    }
    return out;
}

} // namespace epc::speclang
