#ifndef FROBSET_SCENARIO_HPP
#define FROBSET_SCENARIO_HPP

// Plain-text scenario files:
//
//   # comment
//   kind = orbit-intersect
//   [module]
//   free_rank = 1
//   a_ff = [[2]]
//
// Values are integers, bare words, bracketed lists (`;` splits a list into
// free and torsion parts of a module element) and fractions `num / den` of
// two lists.  A value may continue over several lines while brackets are
// open.  Each kind has a fixed schema; unknown keys and sections are errors.

#include "bigint.hpp"

#include <cctype>
#include <limits>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace frobset {

class ParseError : public InputError {
public:
    ParseError(const std::string& msg, std::size_t line, std::size_t col)
        : InputError("line " + std::to_string(line) + ", column " + std::to_string(col) + ": " + msg), line_(line),
          col_(col)
    {
    }
    std::size_t line() const { return line_; }
    std::size_t column() const { return col_; }

private:
    std::size_t line_, col_;
};

struct Value {
    enum class Kind { Integer, Word, List, Fraction };
    Kind kind = Kind::Integer;
    BigInt integer;
    std::string word;
    std::vector<std::vector<Value>> groups;  ///< list items, split at ';'
    std::vector<Value> parts;                ///< numerator, denominator

    static Value of(BigInt i)
    {
        Value v;
        v.integer = std::move(i);
        return v;
    }
    static Value of_word(std::string w)
    {
        Value v;
        v.kind = Kind::Word;
        v.word = std::move(w);
        return v;
    }
    static Value list(std::vector<Value> items)
    {
        Value v;
        v.kind = Kind::List;
        v.groups.push_back(std::move(items));
        return v;
    }
    static Value int_list(const std::vector<std::int64_t>& xs)
    {
        std::vector<Value> items;
        for (auto x : xs)
            items.push_back(of(x));
        return list(std::move(items));
    }

    bool is_int() const { return kind == Kind::Integer; }
    bool is_list() const { return kind == Kind::List; }
    bool grouped() const { return kind == Kind::List && groups.size() > 1; }
    /// Items of an ungrouped list.
    const std::vector<Value>& items() const { return groups.front(); }

    friend bool operator==(const Value& a, const Value& b)
    {
        return a.kind == b.kind && a.integer == b.integer && a.word == b.word && a.groups == b.groups &&
               a.parts == b.parts;
    }

    std::string str() const
    {
        switch (kind) {
        case Kind::Integer:
            return integer.str();
        case Kind::Word:
            return word;
        case Kind::Fraction:
            return parts[0].str() + " / " + parts[1].str();
        case Kind::List: {
            std::string s = "[";
            for (std::size_t g = 0; g < groups.size(); ++g) {
                if (g)
                    s += groups[g - 1].empty() ? "; " : " ; ";
                for (std::size_t i = 0; i < groups[g].size(); ++i)
                    s += (i ? ", " : "") + groups[g][i].str();
            }
            return s + "]";
        }
        }
        return {};
    }
};

struct Entry {
    std::string key;
    Value value;
    std::size_t line = 0;
    friend bool operator==(const Entry& a, const Entry& b) { return a.key == b.key && a.value == b.value; }
};

struct Section {
    std::string name;  ///< empty for the top level
    std::vector<Entry> entries;
    std::size_t line = 0;
    friend bool operator==(const Section& a, const Section& b) { return a.name == b.name && a.entries == b.entries; }

    const Value* find(const std::string& key) const
    {
        for (const auto& e : entries)
            if (e.key == key)
                return &e.value;
        return nullptr;
    }
    const Value& at(const std::string& key) const
    {
        if (const Value* v = find(key))
            return *v;
        throw InputError("missing required key '" + key + "' in " + where());
    }
    std::string where() const { return name.empty() ? std::string("the top level") : "section [" + name + "]"; }
};

struct Scenario {
    std::string kind;
    std::vector<Section> sections;  ///< top level first
    friend bool operator==(const Scenario& a, const Scenario& b) { return a.kind == b.kind && a.sections == b.sections; }

    const Section* section(const std::string& name) const
    {
        for (const auto& s : sections)
            if (s.name == name)
                return &s;
        return nullptr;
    }
    std::vector<const Section*> all(const std::string& name) const
    {
        std::vector<const Section*> out;
        for (const auto& s : sections)
            if (s.name == name)
                out.push_back(&s);
        return out;
    }
    const Section& required(const std::string& name) const
    {
        if (const Section* s = section(name))
            return *s;
        throw InputError("missing required section [" + name + "]");
    }
    /// Replaces or appends key = value in the named section (created when absent).
    void set(const std::string& name, const std::string& key, Value v)
    {
        Section* sec = nullptr;
        for (auto& s : sections)
            if (s.name == name)
                sec = &s;
        if (!sec) {
            sections.push_back(Section{name, {}, 0});
            sec = &sections.back();
        }
        for (auto& e : sec->entries)
            if (e.key == key) {
                e.value = std::move(v);
                return;
            }
        sec->entries.push_back(Entry{key, std::move(v), 0});
    }
};

namespace detail {

class ValueParser {
public:
    ValueParser(const std::string& text, std::size_t line, std::size_t col) : s_(text), line_(line), col0_(col) {}

    Value parse_all()
    {
        Value v = parse_value();
        skip_space();
        if (pos_ < s_.size())
            fail("unexpected '" + std::string(1, s_[pos_]) + "' after value");
        return v;
    }

private:
    [[noreturn]] void fail(const std::string& msg) const
    {
        // the value text may span lines; count newlines up to the position
        std::size_t line = line_, col = col0_;
        for (std::size_t i = 0; i < pos_ && i < s_.size(); ++i) {
            if (s_[i] == '\n') {
                ++line;
                col = 1;
            } else {
                ++col;
            }
        }
        throw ParseError(msg, line, col);
    }
    void skip_space()
    {
        while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_])))
            ++pos_;
    }
    Value parse_value()
    {
        Value v = parse_atom();
        skip_space();
        if (pos_ < s_.size() && s_[pos_] == '/') {
            ++pos_;
            Value den = parse_atom();
            if (!v.is_list() || !den.is_list() || v.grouped() || den.grouped())
                fail("a fraction needs coefficient lists on both sides");
            Value f;
            f.kind = Value::Kind::Fraction;
            f.parts = {std::move(v), std::move(den)};
            return f;
        }
        return v;
    }
    Value parse_atom()
    {
        skip_space();
        if (pos_ >= s_.size())
            fail("missing value");
        const char c = s_[pos_];
        if (c == '[') {
            ++pos_;
            Value v;
            v.kind = Value::Kind::List;
            v.groups.emplace_back();
            skip_space();
            if (pos_ < s_.size() && s_[pos_] == ']') {
                ++pos_;
                return v;
            }
            for (;;) {
                skip_space();
                if (pos_ < s_.size() && s_[pos_] == ';') {
                    ++pos_;
                    v.groups.emplace_back();
                    continue;
                }
                if (pos_ < s_.size() && s_[pos_] == ']' && v.groups.size() > 1 && v.groups.back().empty()) {
                    ++pos_;
                    return v;
                }
                v.groups.back().push_back(parse_value());
                skip_space();
                if (pos_ >= s_.size())
                    fail("unterminated list");
                if (s_[pos_] == ',') {
                    ++pos_;
                } else if (s_[pos_] == ';') {
                    ++pos_;
                    v.groups.emplace_back();
                } else if (s_[pos_] == ']') {
                    ++pos_;
                    return v;
                } else {
                    fail("expected ',', ';' or ']' in list");
                }
            }
        }
        if (c == '-' || c == '+' || std::isdigit(static_cast<unsigned char>(c))) {
            std::size_t start = pos_;
            if (c == '-' || c == '+')
                ++pos_;
            if (pos_ >= s_.size() || !std::isdigit(static_cast<unsigned char>(s_[pos_])))
                fail("malformed integer");
            while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_])))
                ++pos_;
            std::string digits = s_.substr(start, pos_ - start);
            if (digits[0] == '+')
                digits.erase(0, 1);
            return Value::of(BigInt(digits));
        }
        if (std::isalpha(static_cast<unsigned char>(c))) {
            std::size_t start = pos_;
            while (pos_ < s_.size() && (std::isalnum(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '-' ||
                                        s_[pos_] == '_' || s_[pos_] == '.'))
                ++pos_;
            return Value::of_word(s_.substr(start, pos_ - start));
        }
        fail("unexpected '" + std::string(1, c) + "'");
    }

    const std::string& s_;
    std::size_t line_, col0_;
    std::size_t pos_ = 0;
};

inline bool valid_name(const std::string& s)
{
    if (s.empty() || !std::isalpha(static_cast<unsigned char>(s[0])))
        return false;
    for (char c : s)
        if (!std::isalnum(static_cast<unsigned char>(c)) && c != '_' && c != '-')
            return false;
    return true;
}

inline int bracket_depth(const std::string& s)
{
    int d = 0;
    for (char c : s)
        d += c == '[' ? 1 : c == ']' ? -1 : 0;
    return d;
}

} // namespace detail

/// Value shapes checked by the schema.
enum class Shape { Int, Word, IntList, Matrix, Element, ElementList, RatFunc, RatList, RatTupleList, IntListList };

inline const char* shape_name(Shape s)
{
    switch (s) {
    case Shape::Int: return "an integer";
    case Shape::Word: return "a word";
    case Shape::IntList: return "a list of integers";
    case Shape::Matrix: return "a list of integer rows";
    case Shape::Element: return "a module element [free ; torsion]";
    case Shape::ElementList: return "a list of module elements";
    case Shape::RatFunc: return "a coefficient list or fraction of coefficient lists";
    case Shape::RatList: return "a list of rational functions";
    case Shape::RatTupleList: return "a list of tuples of rational functions";
    case Shape::IntListList: return "a list of integer lists";
    }
    return "";
}

namespace detail {

inline bool is_int_list(const Value& v)
{
    if (!v.is_list() || v.grouped())
        return false;
    for (const auto& x : v.items())
        if (!x.is_int())
            return false;
    return true;
}

inline bool is_element(const Value& v)
{
    if (!v.is_list() || v.groups.size() > 2)
        return false;
    for (const auto& g : v.groups)
        for (const auto& x : g)
            if (!x.is_int())
                return false;
    return true;
}

inline bool is_rat(const Value& v) { return is_int_list(v) || (v.kind == Value::Kind::Fraction); }

inline bool list_of(const Value& v, bool (*pred)(const Value&))
{
    if (!v.is_list() || v.grouped())
        return false;
    for (const auto& x : v.items())
        if (!pred(x))
            return false;
    return true;
}

inline bool has_shape(const Value& v, Shape s)
{
    switch (s) {
    case Shape::Int: return v.is_int();
    case Shape::Word: return v.kind == Value::Kind::Word;
    case Shape::IntList: return is_int_list(v);
    case Shape::Matrix: return list_of(v, is_int_list);
    case Shape::Element: return is_element(v);
    case Shape::ElementList: return list_of(v, is_element);
    case Shape::RatFunc: return is_rat(v);
    case Shape::RatList: return list_of(v, is_rat);
    case Shape::RatTupleList: return list_of(v, [](const Value& x) { return list_of(x, is_rat); });
    case Shape::IntListList: return list_of(v, is_int_list);
    }
    return false;
}

struct KeySpec {
    Shape shape;
    bool required;
};

struct SectionSpec {
    bool required = false;
    bool repeatable = false;
    std::map<std::string, KeySpec> keys;
};

using KindSpec = std::map<std::string, SectionSpec>;

inline const std::map<std::string, KindSpec>& schemas()
{
    static const std::map<std::string, KindSpec> table = [] {
        const SectionSpec solver{false, false,
                                 {{"nmax", {Shape::Int, false}},
                                  {"sieve", {Shape::IntList, false}},
                                  {"box", {Shape::Int, false}},
                                  {"max_tie_shift", {Shape::Int, false}},
                                  {"max_search", {Shape::Int, false}},
                                  {"max_table", {Shape::Int, false}}}};
        const SectionSpec module{true, false,
                                 {{"free_rank", {Shape::Int, true}},
                                  {"torsion", {Shape::IntList, false}},
                                  {"a_ff", {Shape::Matrix, false}},
                                  {"a_tf", {Shape::Matrix, false}},
                                  {"a_tt", {Shape::Matrix, false}},
                                  {"minpoly", {Shape::IntList, false}}}};
        const SectionSpec field{false, false, {{"order", {Shape::Int, true}}, {"modulus", {Shape::IntList, false}}}};
        std::map<std::string, KindSpec> t;
        t["orbit-intersect"] = {{"module", module},
                                {"orbit",
                                 {true, false,
                                  {{"base", {Shape::Element, true}},
                                   {"points", {Shape::ElementList, true}},
                                   {"deltas", {Shape::IntList, false}}}}},
                                {"subgroup", {true, false, {{"generators", {Shape::ElementList, true}}}}},
                                {"solver", solver}};
        t["fset"] = {{"module", module},
                     {"fset",
                      {true, false,
                       {{"base", {Shape::Element, true}},
                        {"points", {Shape::ElementList, true}},
                        {"deltas", {Shape::IntList, false}}}}},
                     {"subgroup", {false, false, {{"generators", {Shape::ElementList, true}}}}},
                     {"solver", solver}};
        t["recsolve"] = {{"recurrence",
                          {true, false,
                           {{"f", {Shape::IntList, true}},
                            {"modulus", {Shape::Int, false}},
                            {"k", {Shape::Int, false}}}}},
                         {"congruence",
                          {false, true,
                           {{"coeffs", {Shape::Matrix, true}},
                            {"target", {Shape::Int, true}},
                            {"modulus", {Shape::Int, true}}}}},
                         {"equation", {false, true, {{"coeffs", {Shape::Matrix, true}}, {"target", {Shape::Int, true}}}}},
                         {"solver", solver}};
        t["drinfeld-survey"] = {{"field", field},
                                {"drinfeld",
                                 {true, false,
                                  {{"q", {Shape::Int, true}},
                                   {"phi_t", {Shape::IntList, true}},
                                   {"deg_bound", {Shape::Int, true}}}}}};
        t["drinfeld-sharp"] = {{"sharp", {true, false, {{"q", {Shape::Int, true}}, {"deg_bound", {Shape::Int, true}}}}}};
        SectionSpec gm_field = field;
        gm_field.required = true;
        t["gm-intersect"] = {{"field", gm_field},
                             {"group", {true, false, {{"generators", {Shape::RatTupleList, true}}}}},
                             {"relation",
                              {true, false,
                               {{"coefficients", {Shape::RatList, true}},
                                {"monomials", {Shape::IntListList, false}},
                                {"rhs", {Shape::RatFunc, true}}}}},
                             {"cluster", {false, false, {{"height", {Shape::Int, false}}}}},
                             {"solver", solver}};
        return t;
    }();
    return table;
}

} // namespace detail

inline std::vector<std::string> scenario_kinds()
{
    std::vector<std::string> out;
    for (const auto& [k, spec] : detail::schemas())
        out.push_back(k);
    return out;
}

/// Schema check: known kind, known sections and keys, required ones present, shapes.
inline void validate_scenario(const Scenario& sc)
{
    auto it = detail::schemas().find(sc.kind);
    if (it == detail::schemas().end()) {
        std::string known;
        for (const auto& k : scenario_kinds())
            known += (known.empty() ? "" : ", ") + k;
        throw InputError("unknown scenario kind '" + sc.kind + "' (known: " + known + ")");
    }
    const auto& spec = it->second;
    std::map<std::string, int> seen;
    for (const auto& sec : sc.sections) {
        if (sec.name.empty()) {
            for (const auto& e : sec.entries)
                if (e.key != "kind")
                    throw InputError("unknown key '" + e.key + "' at the top level (line " + std::to_string(e.line) +
                                     ")");
            continue;
        }
        auto ss = spec.find(sec.name);
        if (ss == spec.end())
            throw InputError("unknown section [" + sec.name + "] for kind " + sc.kind + " (line " +
                             std::to_string(sec.line) + ")");
        if (++seen[sec.name] > 1 && !ss->second.repeatable)
            throw InputError("section [" + sec.name + "] given twice (line " + std::to_string(sec.line) + ")");
        std::map<std::string, int> keys;
        for (const auto& e : sec.entries) {
            auto ks = ss->second.keys.find(e.key);
            if (ks == ss->second.keys.end())
                throw InputError("unknown key '" + e.key + "' in section [" + sec.name + "] (line " +
                                 std::to_string(e.line) + ")");
            if (++keys[e.key] > 1)
                throw InputError("key '" + e.key + "' given twice in section [" + sec.name + "]");
            if (!detail::has_shape(e.value, ks->second.shape))
                throw InputError("key '" + e.key + "' in section [" + sec.name + "] must be " +
                                 shape_name(ks->second.shape) + " (line " + std::to_string(e.line) + ")");
        }
        for (const auto& [k, ks] : ss->second.keys)
            if (ks.required && !keys.count(k))
                throw InputError("missing required key '" + k + "' in section [" + sec.name + "]");
    }
    for (const auto& [name, ss] : spec)
        if (ss.required && !seen.count(name))
            throw InputError("missing required section [" + name + "] for kind " + sc.kind);
}

inline Scenario parse_scenario(const std::string& text)
{
    Scenario sc;
    sc.sections.push_back(Section{"", {}, 1});
    std::vector<std::string> lines;
    {
        std::string cur;
        for (char c : text) {
            if (c == '\n') {
                lines.push_back(cur);
                cur.clear();
            } else if (c != '\r') {
                cur += c;
            }
        }
        lines.push_back(cur);
    }
    auto strip_comment = [](const std::string& s) { return s.substr(0, s.find('#')); };
    auto trim = [](const std::string& s) {
        std::size_t a = s.find_first_not_of(" \t"), b = s.find_last_not_of(" \t");
        return a == std::string::npos ? std::string() : s.substr(a, b - a + 1);
    };
    for (std::size_t i = 0; i < lines.size(); ++i) {
        const std::size_t lineno = i + 1;
        std::string raw = strip_comment(lines[i]);
        std::string line = trim(raw);
        if (line.empty())
            continue;
        const std::size_t indent = raw.find_first_not_of(" \t") + 1;
        if (line.front() == '[') {
            if (line.back() != ']')
                throw ParseError("section header must end with ']'", lineno, indent + line.size());
            std::string name = trim(line.substr(1, line.size() - 2));
            if (!detail::valid_name(name))
                throw ParseError("malformed section name '" + name + "'", lineno, indent + 1);
            sc.sections.push_back(Section{name, {}, lineno});
            continue;
        }
        const std::size_t eq = line.find('=');
        if (eq == std::string::npos)
            throw ParseError("expected 'key = value'", lineno, indent);
        std::string key = trim(line.substr(0, eq));
        if (!detail::valid_name(key))
            throw ParseError("malformed key '" + key + "'", lineno, indent);
        std::string value = line.substr(eq + 1);
        std::size_t value_col = indent + eq + 1;
        // continuation lines while brackets are open
        std::size_t j = i;
        while (detail::bracket_depth(value) > 0 && j + 1 < lines.size()) {
            ++j;
            value += "\n" + strip_comment(lines[j]);
        }
        const Value v = detail::ValueParser(value, lineno, value_col).parse_all();
        i = j;
        for (const auto& e : sc.sections.back().entries)
            if (e.key == key)
                throw ParseError("duplicate key '" + key + "'", lineno, indent);
        sc.sections.back().entries.push_back(Entry{key, v, lineno});
    }
    const Value* kind = sc.sections.front().find("kind");
    if (!kind)
        throw InputError("missing required key 'kind' at the top level");
    if (kind->kind != Value::Kind::Word)
        throw InputError("'kind' must be a word");
    sc.kind = kind->word;
    // empty sections carry nothing; keep the document canonical
    validate_scenario(sc);
    return sc;
}

/// Canonical text: the top level, then every section in order.
inline std::string serialize_scenario(const Scenario& sc)
{
    std::string out = "kind = " + sc.kind + "\n";
    for (const auto& sec : sc.sections) {
        if (sec.name.empty())
            continue;
        out += "\n[" + sec.name + "]\n";
        for (const auto& e : sec.entries)
            out += e.key + " = " + e.value.str() + "\n";
    }
    return out;
}

// typed accessors

inline std::int64_t as_int64(const Value& v, const std::string& what)
{
    if (!v.is_int() || v.integer > std::numeric_limits<std::int64_t>::max() ||
        v.integer < std::numeric_limits<std::int64_t>::min())
        throw InputError(what + " must be an integer that fits in 64 bits");
    return static_cast<std::int64_t>(v.integer);
}

inline std::vector<std::int64_t> as_int64_list(const Value& v, const std::string& what)
{
    std::vector<std::int64_t> out;
    for (const auto& x : v.items())
        out.push_back(as_int64(x, what));
    return out;
}

inline std::vector<BigInt> as_big_list(const Value& v)
{
    std::vector<BigInt> out;
    for (const auto& x : v.items())
        out.push_back(x.integer);
    return out;
}

} // namespace frobset

#endif // FROBSET_SCENARIO_HPP
