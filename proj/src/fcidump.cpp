#include "qre/integrals.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cstdio>
#include <fstream>
#include <istream>
#include <optional>
#include <ostream>
#include <regex>
#include <sstream>

#include "qre/error.hpp"

namespace qre::hamiltonian {

IntegralTable::OneKey IntegralTable::canonical(int p, int q) {
    return p <= q ? OneKey{p, q} : OneKey{q, p};
}

IntegralTable::TwoKey IntegralTable::canonical(int p, int q, int r, int s) {
    std::array<int, 2> a = p <= q ? std::array<int, 2>{p, q} : std::array<int, 2>{q, p};
    std::array<int, 2> b = r <= s ? std::array<int, 2>{r, s} : std::array<int, 2>{s, r};
    if (b < a) std::swap(a, b);
    return {a[0], a[1], b[0], b[1]};
}

void IntegralTable::check_index(int p) const {
    if (p < 0 || p >= n_spatial)
        throw ValidationError("orbital index " + std::to_string(p) + " outside [0, " +
                              std::to_string(n_spatial) + ")");
}

double IntegralTable::one_body(int p, int q) const {
    auto it = one_.find(canonical(p, q));
    return it == one_.end() ? 0.0 : it->second;
}

double IntegralTable::two_body(int p, int q, int r, int s) const {
    auto it = two_.find(canonical(p, q, r, s));
    return it == two_.end() ? 0.0 : it->second;
}

void IntegralTable::set_one_body(int p, int q, double value) {
    check_index(p);
    check_index(q);
    one_[canonical(p, q)] = value;
}

void IntegralTable::set_two_body(int p, int q, int r, int s, double value) {
    for (int i : {p, q, r, s}) check_index(i);
    two_[canonical(p, q, r, s)] = value;
}

std::vector<double> IntegralTable::dense_one_body() const {
    const auto n = static_cast<std::size_t>(n_spatial);
    std::vector<double> out(n * n, 0.0);
    for (const auto& [k, v] : one_) {
        out[k[0] * n + k[1]] = v;
        out[k[1] * n + k[0]] = v;
    }
    return out;
}

std::vector<double> IntegralTable::dense_two_body() const {
    const auto n = static_cast<std::size_t>(n_spatial);
    std::vector<double> out(n * n * n * n, 0.0);
    auto at = [&](std::size_t p, std::size_t q, std::size_t r, std::size_t s) -> double& {
        return out[((p * n + q) * n + r) * n + s];
    };
    for (const auto& [k, v] : two_) {
        const std::size_t p = k[0], q = k[1], r = k[2], s = k[3];
        at(p, q, r, s) = v;
        at(q, p, r, s) = v;
        at(p, q, s, r) = v;
        at(q, p, s, r) = v;
        at(r, s, p, q) = v;
        at(s, r, p, q) = v;
        at(r, s, q, p) = v;
        at(s, r, q, p) = v;
    }
    return out;
}

bool operator==(const IntegralTable& a, const IntegralTable& b) {
    return a.n_spatial == b.n_spatial && a.n_electrons == b.n_electrons && a.ms2 == b.ms2 &&
           a.nuclear_repulsion == b.nuclear_repulsion && a.one_ == b.one_ && a.two_ == b.two_;
}

namespace {

std::string upper(std::string s) {
    std::transform(s.begin(), s.end(), s.begin(),
                   [](unsigned char c) { return static_cast<char>(std::toupper(c)); });
    return s;
}

std::vector<std::string> split_values(const std::string& text) {
    std::vector<std::string> out;
    std::string cur;
    for (char c : text) {
        if (c == ',' || std::isspace(static_cast<unsigned char>(c))) {
            if (!cur.empty()) out.push_back(std::move(cur));
            cur.clear();
        } else {
            cur.push_back(c);
        }
    }
    if (!cur.empty()) out.push_back(std::move(cur));
    return out;
}

int parse_int(const std::string& tok, std::size_t line, const char* what) {
    int v = 0;
    auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
    if (ec != std::errc{} || ptr != tok.data() + tok.size())
        throw ParseError(line, std::string("non-numeric ") + what + " '" + tok + "'");
    return v;
}

double parse_value(std::string tok, std::size_t line) {
    if (tok.find('(') != std::string::npos)
        throw ParseError(line, "complex integrals are not supported");
    // Fortran writers sometimes use D exponents.
    std::replace(tok.begin(), tok.end(), 'D', 'E');
    std::replace(tok.begin(), tok.end(), 'd', 'e');
    const char* first = tok.data();
    if (!tok.empty() && tok[0] == '+') ++first;
    double v = 0.0;
    auto [ptr, ec] = std::from_chars(first, tok.data() + tok.size(), v);
    if (ec != std::errc{} || ptr != tok.data() + tok.size())
        throw ParseError(line, "non-numeric value '" + tok + "'");
    return v;
}

struct Header {
    int norb = -1;
    int nelec = -1;
    int ms2 = 0;
};

Header parse_header(const std::string& text, std::size_t first_line) {
    static const std::regex key_re(R"(([A-Za-z][A-Za-z0-9_]*)\s*=)");
    Header h;
    std::vector<std::pair<std::string, std::string>> kv;
    auto begin = std::sregex_iterator(text.begin(), text.end(), key_re);
    auto end = std::sregex_iterator();
    std::string pending_key;
    std::size_t value_start = 0;
    for (auto it = begin; it != end; ++it) {
        if (!pending_key.empty())
            kv.emplace_back(pending_key, text.substr(value_start, it->position() - value_start));
        pending_key = upper((*it)[1].str());
        value_start = it->position() + it->length();
    }
    if (!pending_key.empty()) kv.emplace_back(pending_key, text.substr(value_start));

    for (const auto& [key, raw] : kv) {
        auto vals = split_values(raw);
        auto single = [&](const char* name) {
            if (vals.size() != 1)
                throw ParseError(first_line, std::string("malformed header: ") + name +
                                                 " needs one value");
            return parse_int(vals[0], first_line, name);
        };
        if (key == "NORB") {
            h.norb = single("NORB");
        } else if (key == "NELEC") {
            h.nelec = single("NELEC");
        } else if (key == "MS2") {
            h.ms2 = single("MS2");
        } else if (key == "UHF" || key == "IUHF") {
            std::string v = vals.empty() ? "" : upper(vals[0]);
            if (v == ".TRUE." || v == "T" || v == "1")
                throw ParseError(first_line, "unrestricted integrals are not supported");
        }
    }
    if (h.norb < 0) throw ParseError(first_line, "malformed header: missing NORB");
    if (h.nelec < 0) throw ParseError(first_line, "malformed header: missing NELEC");
    return h;
}

}  // namespace

IntegralTable parse_fcidump(std::istream& in, std::string source_label) {
    std::string line;
    std::size_t lineno = 0;

    // Header: from &FCI up to &END or a bare '/' terminator.
    std::string header_text;
    std::size_t header_line = 0;
    bool in_header = false, header_done = false;
    while (!header_done && std::getline(in, line)) {
        ++lineno;
        std::string u = upper(line);
        if (!in_header) {
            if (u.find_first_not_of(" \t\r") == std::string::npos) continue;
            auto pos = u.find("&FCI");
            if (pos == std::string::npos)
                throw ParseError(lineno, "malformed header: expected &FCI");
            in_header = true;
            header_line = lineno;
            u = u.substr(pos + 4);
            line = line.substr(pos + 4);
        }
        auto end_pos = u.find("&END");
        if (end_pos == std::string::npos) {
            auto last = u.find_last_not_of(" \t\r");
            if (last != std::string::npos && u[last] == '/') end_pos = last;
        }
        if (end_pos != std::string::npos) {
            header_text += line.substr(0, end_pos);
            header_done = true;
        } else {
            header_text += line;
            header_text += '\n';
        }
    }
    if (!header_done)
        throw ParseError(lineno == 0 ? 1 : lineno, "malformed header: missing &END");

    Header h = parse_header(header_text, header_line);
    IntegralTable table;
    table.n_spatial = h.norb;
    table.n_electrons = h.nelec;
    table.ms2 = h.ms2;
    table.source_label = std::move(source_label);

    while (std::getline(in, line)) {
        ++lineno;
        auto toks = split_values(line);
        if (toks.empty()) continue;
        if (toks.size() != 5)
            throw ParseError(lineno, "expected 'value i j k l', got " +
                                         std::to_string(toks.size()) + " fields");
        double v = parse_value(toks[0], lineno);
        std::array<int, 4> idx{};
        for (int k = 0; k < 4; ++k) {
            idx[k] = parse_int(toks[k + 1], lineno, "index");
            if (idx[k] < 0 || idx[k] > h.norb)
                throw ParseError(lineno, "index " + toks[k + 1] + " out of range [0, " +
                                             std::to_string(h.norb) + "]");
        }
        const auto [i, j, k, l] = idx;
        if (i > 0 && j > 0 && k > 0 && l > 0) {
            table.set_two_body(i - 1, j - 1, k - 1, l - 1, v);
        } else if (i > 0 && j > 0 && k == 0 && l == 0) {
            table.set_one_body(i - 1, j - 1, v);
        } else if (i == 0 && j == 0 && k == 0 && l == 0) {
            table.nuclear_repulsion = v;
        } else if (i > 0 && j == 0 && k == 0 && l == 0) {
            // orbital energy; not part of the Hamiltonian
        } else {
            throw ParseError(lineno, "unrecognized index pattern");
        }
    }
    return table;
}

IntegralTable read_fcidump(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw ValidationError("cannot open FCIDUMP '" + path + "'");
    return parse_fcidump(f, path);
}

namespace {
std::string fmt17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}
}  // namespace

void write_fcidump(std::ostream& out, const IntegralTable& t) {
    out << " &FCI NORB=" << t.n_spatial << ",NELEC=" << t.n_electrons << ",MS2=" << t.ms2
        << ",\n  ORBSYM=";
    for (int i = 0; i < t.n_spatial; ++i) out << "1,";
    out << "\n  ISYM=1,\n &END\n";
    for (const auto& [k, v] : t.two_body_entries())
        out << fmt17(v) << ' ' << k[0] + 1 << ' ' << k[1] + 1 << ' ' << k[2] + 1 << ' '
            << k[3] + 1 << '\n';
    for (const auto& [k, v] : t.one_body_entries())
        out << fmt17(v) << ' ' << k[0] + 1 << ' ' << k[1] + 1 << " 0 0\n";
    out << fmt17(t.nuclear_repulsion) << " 0 0 0 0\n";
}

}  // namespace qre::hamiltonian
