#include <algorithm>
#include <cctype>
#include <set>
#include <sstream>
#include <unordered_map>

#include "groovy_lexer.hpp"
#include "smartperm/smartapp.hpp"
#include "text_util.hpp"

namespace smartperm {

using groovy::Tok;
using groovy::Token;

namespace {

constexpr std::size_t npos = std::string::npos;

const std::set<std::string_view> kValueReaders = {"currentValue", "latestValue", "currentState",
                                                  "latestState"};

const std::set<std::string_view> kClosureMethods = {
    "each",    "eachWithIndex", "collect", "findAll", "find",        "any",    "every",
    "findResults", "collectMany", "count", "sum",     "inject", "findResult", "groupBy",
    "sort",    "max",           "min"};

// Device methods that query metadata rather than actuate anything.
const std::set<std::string_view> kNonCommands = {
    "hasCapability",  "hasCommand",        "hasAttribute",     "displayName",
    "getDisplayName", "getLabel",          "getName",          "getId",
    "getDeviceNetworkId", "getManufacturerName", "getModelName", "getTypeName",
    "getStatus",      "getSupportedAttributes", "getSupportedCommands", "getCapabilities",
    "events",         "eventsSince",       "eventsBetween",    "statesSince",
    "statesBetween",  "toString",          "size",             "unique",
    "first",          "last",              "contains",         "join",
    "get",            "getAt",             "put",              "plus",
    "minus",          "asType",            "equals",           "hashCode",
    "getClass",       "respondsTo",        "isEmpty",          "with",
    "getLastActivity", "getHub",           "getDevice",        "currentState",
    "latestState",    "indexOf",           "reverse",          "take",
    "drop",           "flatten",           "subList",          "toList"};

const std::set<std::string_view> kSchedulers = {
    "runIn",           "runOnce",           "schedule",         "runEvery1Minute",
    "runEvery5Minutes", "runEvery10Minutes", "runEvery15Minutes", "runEvery30Minutes",
    "runEvery1Hour",   "runEvery3Hours",    "runDaily"};

const std::set<std::string_view> kContinuesAfter = {
    ",", ".", "?.", "*.", "+", "-", "*", "/", "=", "==", "!=", "&&", "||", "?", "->", "<",
    ">", "<=", ">=", "+=", "-=", "<<", "?:", "(", "[", "=~", "==~", "%"};

const std::set<std::string_view> kContinuesBefore = {".", "?.", "*.", "&&", "||", "?", ":", "?:"};

bool is_member_op(const Token& t) {
    return t.kind == Tok::Punct && (t.text == "." || t.text == "?." || t.text == "*.");
}

bool is_open(const Token& t) {
    return t.kind == Tok::Punct && (t.text == "(" || t.text == "[" || t.text == "{");
}

std::string lower_first(std::string s) {
    if (!s.empty())
        s[0] = static_cast<char>(std::tolower(static_cast<unsigned char>(s[0])));
    return s;
}

struct Ctx {
    std::string event_param;
    std::unordered_map<std::string, std::string> aliases;  // closure/loop variable -> device
};

struct PropertyRead {
    std::string device;
    std::string attribute;
    std::size_t end;  // one past the last token of the read
};

class Parser {
public:
    explicit Parser(std::string_view src)
        : src_(src), ts_(groovy::lex(src)), toks_(ts_.tokens) {}

    SmartAppAst run() {
        scan_top_level();
        scan_inputs();
        for (auto& pm : pending_methods_) {
            Ctx ctx;
            ctx.event_param = pm.method.params.empty() ? "evt" : pm.method.params.front();
            pm.method.body = parse_block(pm.open + 1, pm.close, ctx);
            ast_.methods.push_back(std::move(pm.method));
        }
        ast_.line_count = src_.empty() ? 0 : split_lines(src_).size();
        ast_.reindex();
        return std::move(ast_);
    }

private:
    struct PendingMethod {
        Method method;
        std::size_t open;
        std::size_t close;
    };

    const Token& tok(std::size_t i) const { return toks_[std::min(i, toks_.size() - 1)]; }

    std::size_t partner(std::size_t i) const {
        auto p = i < ts_.partner.size() ? ts_.partner[i] : npos;
        return p == npos ? toks_.size() - 1 : p;
    }

    std::size_t skip_nl(std::size_t i) const {
        while (tok(i).kind == Tok::Newline)
            ++i;
        return i;
    }

    Span span_of(std::size_t b, std::size_t last) const {
        Span s;
        s.begin = tok(b).begin;
        s.end = tok(last).end;
        s.line = tok(b).line;
        s.column = tok(b).column;
        return s;
    }

    bool is_device(const std::string& name, const Ctx& ctx) const {
        return input_ids_.count(name) > 0 || ctx.aliases.count(name) > 0;
    }

    std::string device_name(const std::string& name, const Ctx& ctx) const {
        auto it = ctx.aliases.find(name);
        return it == ctx.aliases.end() ? name : it->second;
    }

    // Top-level comma split of [b, e), brackets skipped via partner links.
    std::vector<std::pair<std::size_t, std::size_t>> split_args(std::size_t b, std::size_t e) const {
        std::vector<std::pair<std::size_t, std::size_t>> out;
        std::size_t start = b;
        for (std::size_t k = b; k < e;) {
            if (is_open(tok(k))) {
                k = partner(k) + 1;
                continue;
            }
            if (tok(k).is(",")) {
                out.emplace_back(start, k);
                start = k + 1;
            }
            ++k;
        }
        if (start < e)
            out.emplace_back(start, e);
        // Drop ranges that hold only newlines.
        std::vector<std::pair<std::size_t, std::size_t>> kept;
        for (auto [x, y] : out) {
            while (x < y && tok(x).kind == Tok::Newline)
                ++x;
            while (y > x && tok(y - 1).kind == Tok::Newline)
                --y;
            if (x < y)
                kept.emplace_back(x, y);
        }
        return kept;
    }

    // Concatenated string literals ("a" + "b"), or nullopt for anything else.
    std::optional<std::string> string_value(std::size_t b, std::size_t e) const {
        std::string out;
        bool want_string = true;
        bool any = false;
        for (std::size_t k = b; k < e; ++k) {
            const auto& t = tok(k);
            if (t.kind == Tok::Newline)
                continue;
            if (want_string && t.kind == Tok::String) {
                out += t.text;
                any = true;
                want_string = false;
            } else if (!want_string && t.is("+")) {
                want_string = true;
            } else {
                return std::nullopt;
            }
        }
        if (!any || want_string)
            return std::nullopt;
        return out;
    }

    std::string arg_text(std::size_t b, std::size_t e) const {
        if (e == b + 1 && (tok(b).kind == Tok::String || tok(b).kind == Tok::Ident))
            return tok(b).text;
        if (auto s = string_value(b, e))
            return *s;
        std::string out;
        for (std::size_t k = b; k < e; ++k)
            if (tok(k).kind != Tok::Newline)
                out += tok(k).text;
        return out;
    }

    void scan_top_level() {
        std::size_t i = 0;
        while (tok(i).kind != Tok::End) {
            const auto& t = tok(i);
            if (t.kind == Tok::Ident && t.text == "definition" && tok(skip_nl(i + 1)).is("(")) {
                std::size_t open = skip_nl(i + 1);
                parse_definition(open + 1, partner(open));
                i = partner(open) + 1;
                continue;
            }
            if (t.kind == Tok::Ident && t.text == "preferences") {
                std::size_t j = i + 1;
                if (tok(j).is("("))
                    j = partner(j) + 1;
                j = skip_nl(j);
                if (tok(j).is("{")) {
                    ast_.has_preferences = true;
                    pref_open_ = j;
                    pref_close_ = partner(j);
                    ast_.section_container_close = tok(pref_close_).begin;
                    i = pref_close_ + 1;
                    continue;
                }
            }
            if (auto next = try_method(i); next != npos) {
                i = next;
                continue;
            }
            i = is_open(t) ? partner(i) + 1 : i + 1;
        }
    }

    void parse_definition(std::size_t b, std::size_t e) {
        for (auto [x, y] : split_args(b, e)) {
            if (y - x < 3 || (tok(x).kind != Tok::Ident && tok(x).kind != Tok::String) ||
                !tok(x + 1).is(":"))
                continue;
            auto value = string_value(x + 2, y);
            if (!value)
                continue;
            ast_.meta.fields[tok(x).text] = *value;
            if (tok(x).text == "name")
                ast_.meta.name = *value;
            else if (tok(x).text == "description")
                ast_.meta.description = *value;
        }
    }

    // `[modifiers/type] name(params) {` at top level. Returns the index after
    // the body, or npos if i does not start a declaration.
    std::size_t try_method(std::size_t i) {
        if (tok(i).kind != Tok::Ident)
            return npos;
        if (i > 0 && tok(i - 1).kind != Tok::Newline && !tok(i - 1).is(";") && !tok(i - 1).is("}"))
            return npos;
        std::size_t k = i;
        while (tok(k).kind == Tok::Ident)
            ++k;
        if (k - i < 2 || !tok(k).is("("))
            return npos;
        const auto& name_tok = tok(k - 1);
        static const std::set<std::string_view> kReserved = {"if", "for", "while", "switch",
                                                             "catch", "return", "new"};
        if (kReserved.count(name_tok.text))
            return npos;
        std::size_t pclose = partner(k);
        std::size_t open = skip_nl(pclose + 1);
        if (!tok(open).is("{"))
            return npos;
        std::size_t close = partner(open);

        Method m;
        m.name = name_tok.text;
        for (auto [x, y] : split_args(k + 1, pclose)) {
            std::size_t last = y;
            for (std::size_t q = x; q < y; ++q)
                if (tok(q).is("=")) {
                    last = q;
                    break;
                }
            for (std::size_t q = last; q > x; --q)
                if (tok(q - 1).kind == Tok::Ident) {
                    m.params.push_back(tok(q - 1).text);
                    break;
                }
        }
        m.span = span_of(i, close);
        m.body_open = tok(open).begin;
        m.body_close = tok(close).begin;
        if (method_names_.count(m.name)) {
            ast_.warnings.push_back("line " + std::to_string(name_tok.line) +
                                    ": duplicate method '" + m.name + "' ignored");
        } else {
            method_names_.insert(m.name);
            pending_methods_.push_back({std::move(m), open, close});
        }
        return close + 1;
    }

    bool at_statement_start(std::size_t i) const {
        if (i == 0)
            return true;
        const auto& p = tok(i - 1);
        return p.kind == Tok::Newline || p.is("{") || p.is(";") || p.is("}") || p.is(")");
    }

    void scan_inputs() {
        struct Frame {
            std::size_t close;
            std::string title;
        };
        std::vector<Frame> sections;
        std::vector<std::size_t> braces;
        bool seen_section_in_prefs = false;
        std::set<std::string> ids;

        for (std::size_t i = 0; tok(i).kind != Tok::End; ++i) {
            while (!sections.empty() && i >= sections.back().close)
                sections.pop_back();
            const auto& t = tok(i);
            if (t.is("{")) {
                braces.push_back(i);
                continue;
            }
            if (t.is("}")) {
                if (!braces.empty())
                    braces.pop_back();
                continue;
            }
            if (t.kind != Tok::Ident)
                continue;
            if (t.text == "section" && at_statement_start(i)) {
                std::size_t j = i + 1;
                std::string title;
                if (tok(j).is("(")) {
                    for (std::size_t q = j + 1; q < partner(j); ++q)
                        if (tok(q).kind == Tok::String) {
                            title = tok(q).text;
                            break;
                        }
                    j = partner(j) + 1;
                }
                j = skip_nl(j);
                if (tok(j).is("{")) {
                    bool in_prefs = ast_.has_preferences && i > pref_open_ && i < pref_close_;
                    if (in_prefs && !seen_section_in_prefs && !braces.empty()) {
                        seen_section_in_prefs = true;
                        ast_.section_container_close = tok(partner(braces.back())).begin;
                    }
                    sections.push_back({partner(j), title});
                }
                continue;
            }
            if (t.text == "input" && at_statement_start(i)) {
                const auto& n = tok(i + 1);
                if (!(n.is("(") || n.kind == Tok::String || n.kind == Tok::Ident))
                    continue;
                std::size_t end = parse_input(i, sections.empty() ? "" : sections.back().title, ids);
                i = end > i ? end - 1 : i;
            }
        }
    }

    // Returns the index one past the input statement.
    std::size_t parse_input(std::size_t i, const std::string& title, std::set<std::string>& ids) {
        std::size_t b, e, next;
        if (tok(i + 1).is("(")) {
            b = i + 2;
            e = partner(i + 1);
            next = e + 1;
        } else {
            b = i + 1;
            std::size_t j = b;
            while (true) {
                const auto& t = tok(j);
                if (t.kind == Tok::End || t.is(";") || t.is("}"))
                    break;
                if (is_open(t)) {
                    j = partner(j) + 1;
                    continue;
                }
                if (t.kind == Tok::Newline) {
                    std::size_t k = skip_nl(j);
                    if (tok(j - 1).is(",") || tok(k).is(",")) {
                        j = k;
                        continue;
                    }
                    break;
                }
                ++j;
            }
            e = j;
            next = j;
        }

        std::vector<std::string> positional;
        std::map<std::string, std::string> named;
        for (auto [x, y] : split_args(b, e)) {
            if (y - x >= 2 && (tok(x).kind == Tok::Ident || tok(x).kind == Tok::String) &&
                tok(x + 1).is(":")) {
                named[tok(x).text] = arg_text(x + 2, y);
            } else {
                positional.push_back(arg_text(x, y));
            }
        }
        std::string id = named.count("name") ? named["name"]
                         : positional.size() > 0 ? positional[0] : "";
        std::string type = named.count("type") ? named["type"]
                           : positional.size() > 1 ? positional[1] : "";
        constexpr std::string_view kPrefix = "capability.";
        if (id.empty() || type.rfind(kPrefix, 0) != 0)
            return next;
        std::string cap = type.substr(kPrefix.size());
        if (cap.empty() || std::any_of(cap.begin(), cap.end(),
                                       [](char c) { return std::isspace(static_cast<unsigned char>(c)); }))
            return next;
        if (!ids.insert(id).second) {
            ast_.warnings.push_back("line " + std::to_string(tok(i).line) + ": duplicate input '" +
                                    id + "' ignored");
            return next;
        }
        InputDecl in;
        in.device_id = id;
        in.capability = cap;
        in.section_title = title;
        in.span = span_of(i, e > i ? e - 1 : i);
        input_ids_.insert(id);
        ast_.inputs.push_back(std::move(in));
        return next;
    }

    bool continuation(std::size_t nl) const {
        std::size_t p = nl;
        while (p > 0 && tok(p - 1).kind == Tok::Newline)
            --p;
        if (p > 0 && tok(p - 1).kind == Tok::Punct && kContinuesAfter.count(tok(p - 1).text))
            return true;
        const auto& n = tok(skip_nl(nl));
        return n.kind == Tok::Punct && kContinuesBefore.count(n.text);
    }

    std::size_t statement_end(std::size_t i, std::size_t e) const {
        std::size_t j = i;
        while (j < e) {
            const auto& t = tok(j);
            if (is_open(t)) {
                j = partner(j) + 1;
                continue;
            }
            if (t.is(";") || t.is("}"))
                return j;
            if (t.kind == Tok::Newline && !continuation(j))
                return j;
            ++j;
        }
        return std::min(j, e);
    }

    std::vector<Stmt> parse_block(std::size_t b, std::size_t e, const Ctx& ctx) {
        std::vector<Stmt> out;
        std::size_t i = b;
        while (i < e) {
            const auto& t = tok(i);
            if (t.kind == Tok::Newline || t.is(";") || t.is("}")) {
                ++i;
                continue;
            }
            std::size_t next = parse_statement(i, e, ctx, out);
            i = std::max(next, i + 1);
        }
        return out;
    }

    std::size_t parse_body(std::size_t k, std::size_t e, const Ctx& ctx, std::vector<Stmt>& out) {
        k = skip_nl(k);
        if (tok(k).is("{")) {
            auto body = parse_block(k + 1, partner(k), ctx);
            out.insert(out.end(), std::make_move_iterator(body.begin()),
                       std::make_move_iterator(body.end()));
            return partner(k) + 1;
        }
        if (k >= e)
            return k;
        return parse_statement(k, e, ctx, out);
    }

    std::size_t parse_statement(std::size_t i, std::size_t e, const Ctx& ctx, std::vector<Stmt>& out) {
        const auto& t = tok(i);
        if (t.kind == Tok::Ident) {
            if (t.text == "if" && tok(i + 1).is("("))
                return parse_if(i, e, ctx, out);
            if (t.text == "else")
                return i + 1;
            if ((t.text == "for" || t.text == "while" || t.text == "switch" ||
                 t.text == "synchronized" || t.text == "catch") &&
                tok(i + 1).is("(")) {
                Ctx inner = ctx;
                if (t.text == "for")
                    bind_loop_alias(i + 2, partner(i + 1), inner);
                return parse_body(partner(i + 1) + 1, e, inner, out);
            }
            if ((t.text == "try" || t.text == "finally" || t.text == "do") &&
                tok(skip_nl(i + 1)).is("{"))
                return parse_body(i + 1, e, ctx, out);
        }
        std::size_t end = statement_end(i, e);
        std::size_t before = out.size();
        analyze(i, end, ctx, out);
        if (out.size() == before && end > i) {
            Stmt s;
            s.kind = StmtKind::Other;
            s.span = span_of(i, end - 1);
            out.push_back(std::move(s));
        }
        return end;
    }

    void bind_loop_alias(std::size_t b, std::size_t e, Ctx& ctx) const {
        for (std::size_t k = b; k + 1 < e; ++k) {
            if ((tok(k).is("in") || tok(k).is(":")) && k > b && tok(k - 1).kind == Tok::Ident &&
                tok(k + 1).kind == Tok::Ident && is_device(tok(k + 1).text, ctx)) {
                ctx.aliases[tok(k - 1).text] = device_name(tok(k + 1).text, ctx);
                return;
            }
        }
    }

    std::size_t parse_if(std::size_t i, std::size_t e, const Ctx& ctx, std::vector<Stmt>& out) {
        std::size_t cclose = partner(i + 1);
        Stmt s;
        s.kind = StmtKind::Condition;
        s.comparisons = comparisons(i + 2, cclose, ctx);
        if (!s.comparisons.empty()) {
            s.device_id = s.comparisons.front().device_id;
            s.name = s.comparisons.front().attribute;
        }
        std::size_t k = parse_body(cclose + 1, e, ctx, s.body);
        std::size_t m = k;
        while (m < e && (tok(m).kind == Tok::Newline || tok(m).is(";")))
            ++m;
        if (m < e && tok(m).is("else")) {
            std::size_t n = skip_nl(m + 1);
            if (tok(n).is("if") && tok(n + 1).is("("))
                k = parse_if(n, e, ctx, s.else_body);
            else
                k = parse_body(m + 1, e, ctx, s.else_body);
        }
        s.span = span_of(i, k > i ? k - 1 : i);
        out.push_back(std::move(s));
        return k;
    }

    std::optional<PropertyRead> property_read(std::size_t k, std::size_t e, const Ctx& ctx) const {
        const auto& d = tok(k);
        if (d.kind != Tok::Ident || k + 2 >= e || !is_member_op(tok(k + 1)) ||
            tok(k + 2).kind != Tok::Ident)
            return std::nullopt;
        if (k > 0 && is_member_op(tok(k - 1)))
            return std::nullopt;
        if (!is_device(d.text, ctx))
            return std::nullopt;
        const auto& n = tok(k + 2).text;
        PropertyRead r;
        r.device = device_name(d.text, ctx);
        if (kValueReaders.count(n)) {
            if (!tok(k + 3).is("(") || tok(k + 4).kind != Tok::String)
                return std::nullopt;
            r.attribute = tok(k + 4).text;
            r.end = partner(k + 3) + 1;
            if (is_member_op(tok(r.end)) && tok(r.end + 1).is("value"))
                r.end += 2;
            return r;
        }
        if (n.size() > 7 && n.rfind("current", 0) == 0 &&
            std::isupper(static_cast<unsigned char>(n[7]))) {
            r.attribute = lower_first(n.substr(7));
            r.end = k + 3;
            return r;
        }
        return std::nullopt;
    }

    std::vector<Comparison> comparisons(std::size_t b, std::size_t e, const Ctx& ctx) const {
        std::vector<Comparison> out;
        auto literal_near = [&](std::size_t first, std::size_t end) -> std::optional<std::string> {
            const auto& after = tok(end);
            if ((after.is("==") || after.is("!=")) && end + 1 < e && tok(end + 1).kind == Tok::String)
                return tok(end + 1).text;
            if (first >= b + 2 && (tok(first - 1).is("==") || tok(first - 1).is("!=")) &&
                tok(first - 2).kind == Tok::String)
                return tok(first - 2).text;
            return std::nullopt;
        };
        for (std::size_t k = b; k < e;) {
            if (auto r = property_read(k, e, ctx)) {
                out.push_back({r->device, r->attribute, literal_near(k, r->end)});
                k = r->end;
                continue;
            }
            const auto& t = tok(k);
            if (t.kind == Tok::Ident && t.text == ctx.event_param && is_member_op(tok(k + 1)) &&
                tok(k + 2).is("value") && !(k > 0 && is_member_op(tok(k - 1)))) {
                out.push_back({"evt", "value", literal_near(k, k + 3)});
                k += 3;
                continue;
            }
            ++k;
        }
        return out;
    }

    void parse_closure(std::size_t open, const std::string& device, const Ctx& ctx,
                       std::vector<Stmt>& out) {
        std::size_t close = partner(open);
        std::size_t body = open + 1;
        Ctx inner = ctx;
        std::string param = "it";
        std::size_t q = skip_nl(body);
        std::vector<std::string> params;
        while (tok(q).kind == Tok::Ident) {
            params.push_back(tok(q).text);
            ++q;
            if (tok(q).is(","))
                ++q;
            else
                break;
        }
        if (!params.empty() && tok(q).is("->")) {
            param = params.front();
            body = q + 1;
        }
        if (!device.empty())
            inner.aliases[param] = device;
        auto stmts = parse_block(body, close, inner);
        out.insert(out.end(), std::make_move_iterator(stmts.begin()),
                   std::make_move_iterator(stmts.end()));
    }

    void analyze(std::size_t b, std::size_t e, const Ctx& ctx, std::vector<Stmt>& out) {
        for (std::size_t k = b; k < e;) {
            const auto& t = tok(k);
            bool after_member = k > 0 && is_member_op(tok(k - 1));

            if (t.kind == Tok::Ident && t.text == "log" && !after_member && is_member_op(tok(k + 1)) &&
                tok(k + 2).kind == Tok::Ident) {
                std::size_t m = k + 3;
                k = tok(m).is("(") ? partner(m) + 1 : e;
                continue;
            }

            if (t.kind == Tok::Ident && t.text == "subscribe" && !after_member) {
                std::size_t ab, ae, next;
                if (tok(k + 1).is("(")) {
                    ab = k + 2;
                    ae = partner(k + 1);
                    next = ae + 1;
                } else if (k == b) {
                    ab = k + 1;
                    ae = e;
                    next = e;
                } else {
                    ++k;
                    continue;
                }
                Stmt s;
                s.kind = StmtKind::Subscribe;
                for (auto [x, y] : split_args(ab, ae))
                    s.args.push_back(arg_text(x, y));
                if (!s.args.empty())
                    s.args[0] = device_name(s.args[0], ctx);
                s.name = "subscribe";
                s.span = span_of(k, next > k ? next - 1 : k);
                out.push_back(std::move(s));
                k = next;
                continue;
            }

            if (auto r = property_read(k, e, ctx)) {
                Stmt s;
                s.kind = StmtKind::DeviceProperty;
                s.device_id = r->device;
                s.name = r->attribute;
                s.span = span_of(k, r->end - 1);
                s.name_span = span_of(k + 2, k + 2);
                out.push_back(std::move(s));
                k = r->end;
                continue;
            }

            if (t.kind == Tok::Ident && !after_member && is_device(t.text, ctx) &&
                is_member_op(tok(k + 1)) && tok(k + 2).kind == Tok::Ident) {
                const auto& n = tok(k + 2).text;
                std::string dev = device_name(t.text, ctx);
                if (kClosureMethods.count(n)) {
                    std::size_t m = k + 3;
                    if (tok(m).is("("))
                        m = partner(m) + 1;
                    if (tok(m).is("{")) {
                        parse_closure(m, dev, ctx, out);
                        k = partner(m) + 1;
                    } else {
                        k = k + 3;
                    }
                    continue;
                }
                if (tok(k + 3).is("(") && !kNonCommands.count(n)) {
                    Stmt s;
                    s.kind = StmtKind::DeviceCall;
                    s.device_id = dev;
                    s.name = n;
                    s.span = span_of(k, partner(k + 3));
                    s.name_span = span_of(k + 2, k + 2);
                    out.push_back(std::move(s));
                }
                k = k + 3;
                continue;
            }

            if (t.kind == Tok::Ident && !after_member && tok(k + 1).is("(")) {
                if (method_names_.count(t.text)) {
                    Stmt s;
                    s.kind = StmtKind::MethodCall;
                    s.name = t.text;
                    s.span = span_of(k, partner(k + 1));
                    out.push_back(std::move(s));
                } else if (kSchedulers.count(t.text)) {
                    for (auto [x, y] : split_args(k + 2, partner(k + 1))) {
                        if (y != x + 1)
                            continue;
                        const auto& a = tok(x);
                        if ((a.kind == Tok::Ident || a.kind == Tok::String) &&
                            method_names_.count(a.text)) {
                            Stmt s;
                            s.kind = StmtKind::MethodCall;
                            s.name = a.text;
                            s.span = span_of(k, partner(k + 1));
                            out.push_back(std::move(s));
                            break;
                        }
                    }
                }
                k = k + 2;
                continue;
            }

            if (t.is("{")) {
                parse_closure(k, "", ctx, out);
                k = partner(k) + 1;
                continue;
            }
            ++k;
        }
    }

    std::string_view src_;
    groovy::TokenStream ts_;
    const std::vector<Token>& toks_;
    SmartAppAst ast_;
    std::set<std::string> method_names_;
    std::set<std::string> input_ids_;
    std::vector<PendingMethod> pending_methods_;
    std::size_t pref_open_ = 0;
    std::size_t pref_close_ = 0;
};

void collect_subscriptions(const std::vector<Stmt>& stmts, std::vector<Subscription>& out,
                           std::vector<std::string>* warnings) {
    for (const auto& s : stmts) {
        if (s.kind == StmtKind::Subscribe) {
            if (s.args.size() < 2) {
                if (warnings)
                    warnings->push_back("line " + std::to_string(s.span.line) +
                                        ": subscribe with fewer than 2 arguments ignored");
                continue;
            }
            Subscription sub;
            sub.device_id = s.args[0];
            sub.span = s.span;
            if (s.args.size() == 2) {
                sub.attribute = s.args[1];
                sub.handler = s.args[1];
            } else {
                const auto& ev = s.args[1];
                auto dot = ev.find('.');
                if (dot == std::string::npos) {
                    sub.attribute = ev;
                } else {
                    sub.attribute = ev.substr(0, dot);
                    if (dot + 1 < ev.size())
                        sub.value = ev.substr(dot + 1);
                }
                sub.handler = s.args[2];
            }
            if (sub.handler.empty() || sub.attribute.empty()) {
                if (warnings)
                    warnings->push_back("line " + std::to_string(s.span.line) +
                                        ": subscribe without handler ignored");
                continue;
            }
            out.push_back(std::move(sub));
        }
        collect_subscriptions(s.body, out, warnings);
        collect_subscriptions(s.else_body, out, warnings);
    }
}

void dump_stmts(std::ostringstream& os, const std::vector<Stmt>& stmts, int depth) {
    for (const auto& s : stmts) {
        os << std::string(static_cast<std::size_t>(depth) * 2, ' ') << to_string(s.kind);
        switch (s.kind) {
        case StmtKind::Condition:
            for (const auto& c : s.comparisons)
                os << " [" << c.device_id << "." << c.attribute << " == "
                   << (c.value ? *c.value : "?") << "]";
            break;
        case StmtKind::DeviceCall:
        case StmtKind::DeviceProperty:
            os << " " << s.device_id << "." << s.name;
            break;
        case StmtKind::Subscribe:
            for (const auto& a : s.args)
                os << " " << a;
            break;
        case StmtKind::MethodCall:
            os << " " << s.name;
            break;
        case StmtKind::Other:
            break;
        }
        os << " @" << s.span.line << ":" << s.span.column << "\n";
        dump_stmts(os, s.body, depth + 1);
        if (!s.else_body.empty()) {
            os << std::string(static_cast<std::size_t>(depth) * 2, ' ') << "else\n";
            dump_stmts(os, s.else_body, depth + 1);
        }
    }
}

}  // namespace

const char* to_string(StmtKind k) {
    switch (k) {
    case StmtKind::Condition:
        return "condition";
    case StmtKind::DeviceCall:
        return "device_call";
    case StmtKind::DeviceProperty:
        return "device_property";
    case StmtKind::Subscribe:
        return "subscribe";
    case StmtKind::MethodCall:
        return "method_call";
    case StmtKind::Other:
        return "other";
    }
    return "other";
}

const Method* SmartAppAst::find_method(std::string_view name) const {
    if (method_index_.size() == methods.size()) {
        auto it = method_index_.find(name);
        if (it == method_index_.end())
            return nullptr;
        if (it->second < methods.size() && methods[it->second].name == name)
            return &methods[it->second];
    }
    for (const auto& m : methods)
        if (m.name == name)
            return &m;
    return nullptr;
}

const InputDecl* SmartAppAst::find_input(std::string_view id) const {
    if (input_index_.size() == inputs.size()) {
        auto it = input_index_.find(id);
        if (it == input_index_.end())
            return nullptr;
        if (it->second < inputs.size() && inputs[it->second].device_id == id)
            return &inputs[it->second];
    }
    for (const auto& in : inputs)
        if (in.device_id == id)
            return &in;
    return nullptr;
}

void SmartAppAst::reindex() {
    method_index_.clear();
    input_index_.clear();
    for (std::size_t i = 0; i < methods.size(); ++i)
        method_index_.emplace(methods[i].name, i);
    for (std::size_t i = 0; i < inputs.size(); ++i)
        input_index_.emplace(inputs[i].device_id, i);
}

SmartAppAst parse_app(std::string_view source) {
    return Parser(source).run();
}

std::vector<Subscription> extract_subscriptions(const SmartAppAst& ast,
                                                std::vector<std::string>* warnings) {
    std::vector<Subscription> out;
    for (const auto& m : ast.methods)
        collect_subscriptions(m.body, out, warnings);
    return out;
}

std::optional<std::string> resolve_device_capability(const SmartAppAst& ast,
                                                     std::string_view device_id) {
    if (const auto* in = ast.find_input(device_id))
        return in->capability;
    return std::nullopt;
}

std::string dump_ast(const SmartAppAst& ast) {
    std::ostringstream os;
    os << "name: " << ast.meta.name << "\n";
    os << "description: " << ast.meta.description << "\n";
    for (const auto& in : ast.inputs)
        os << "input " << in.device_id << " : " << in.capability << " [" << in.section_title
           << "] @" << in.span.line << "\n";
    for (const auto& m : ast.methods) {
        os << "method " << m.name << "(";
        for (std::size_t i = 0; i < m.params.size(); ++i)
            os << (i ? ", " : "") << m.params[i];
        os << ") @" << m.span.line << "\n";
        dump_stmts(os, m.body, 1);
    }
    return os.str();
}

}  // namespace smartperm
