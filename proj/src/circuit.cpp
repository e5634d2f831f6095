#include "qre/circuit.hpp"

#include <algorithm>

#include "qre/clifford.hpp"

namespace qre::oracle {

using hamiltonian::Pauli;
using hamiltonian::PauliString;

std::vector<Gate> string_circuit(const PauliString& s) {
    std::vector<Gate> g;
    for (const auto& [q, p] : s.letters) {
        if (p == Pauli::X) g.push_back({GateKind::H, q});
        if (p == Pauli::Y) g.push_back({GateKind::V, q});
    }
    for (std::size_t k = 0; k + 1 < s.letters.size(); ++k)
        g.push_back({GateKind::CNOT, s.letters[k].first, s.letters[k + 1].first});
    g.push_back({GateKind::Rz, s.letters.back().first});
    for (std::size_t k = s.letters.size() - 1; k-- > 0;)
        g.push_back({GateKind::CNOT, s.letters[k].first, s.letters[k + 1].first});
    for (const auto& [q, p] : s.letters) {
        if (p == Pauli::X) g.push_back({GateKind::H, q});
        if (p == Pauli::Y) g.push_back({GateKind::Vdg, q});
    }
    return g;
}

GateCount count_gates(std::span<const Gate> gates) {
    GateCount c;
    for (const auto& g : gates) {
        switch (g.kind) {
            case GateKind::CNOT: ++c.cnot; break;
            case GateKind::Rz: ++c.rotations; break;
            default: ++c.single_clifford; break;
        }
    }
    return c;
}

namespace {

bool inverse_pair(const Gate& a, const Gate& b) {
    if (a.q0 != b.q0 || a.q1 != b.q1) return false;
    switch (a.kind) {
        case GateKind::H: return b.kind == GateKind::H;
        case GateKind::CNOT: return b.kind == GateKind::CNOT;
        case GateKind::V: return b.kind == GateKind::Vdg;
        case GateKind::Vdg: return b.kind == GateKind::V;
        case GateKind::Rz: return false;
    }
    return false;
}

}  // namespace

std::vector<Gate> cancel_inverses(std::span<const Gate> gates) {
    int width = 0;
    for (const auto& g : gates) width = std::max({width, g.q0 + 1, g.q1 + 1});
    // Per-wire stacks of surviving gates. A gate cancels only against the gate on
    // top of every one of its wires, which makes the single pass a fixpoint.
    std::vector<std::vector<std::size_t>> wire(static_cast<std::size_t>(width));
    std::vector<bool> alive(gates.size(), false);
    for (std::size_t i = 0; i < gates.size(); ++i) {
        const Gate& g = gates[i];
        const int ws[2] = {g.q0, g.q1};
        const int nw = g.q1 >= 0 ? 2 : 1;
        bool cancelled = false;
        auto& s0 = wire[static_cast<std::size_t>(ws[0])];
        if (!s0.empty()) {
            std::size_t h = s0.back();
            bool on_top = nw == 1 || (!wire[static_cast<std::size_t>(ws[1])].empty() &&
                                      wire[static_cast<std::size_t>(ws[1])].back() == h);
            if (on_top && inverse_pair(gates[h], g)) {
                for (int k = 0; k < nw; ++k) wire[static_cast<std::size_t>(ws[k])].pop_back();
                alive[h] = false;
                cancelled = true;
            }
        }
        if (!cancelled) {
            alive[i] = true;
            for (int k = 0; k < nw; ++k) wire[static_cast<std::size_t>(ws[k])].push_back(i);
        }
    }
    std::vector<Gate> out;
    for (std::size_t i = 0; i < gates.size(); ++i)
        if (alive[i]) out.push_back(gates[i]);
    return out;
}

GateCount step_circuit_count(const hamiltonian::TermList& terms) {
    const auto strings = hamiltonian::trotter_step_strings(terms);
    std::vector<std::vector<Gate>> circuits;
    circuits.reserve(strings.size());
    GateCount total;
    for (const auto& s : strings) {
        circuits.push_back(string_circuit(s));
        auto c = count_gates(circuits.back());
        total.cnot += c.cnot;
        total.single_clifford += c.single_clifford;
        total.rotations += c.rotations;
    }
    auto rz_pos = [](const std::vector<Gate>& c) {
        return static_cast<std::size_t>(
            std::find_if(c.begin(), c.end(), [](const Gate& g) { return g.kind == GateKind::Rz; }) -
            c.begin());
    };
    for (std::size_t k = 0; k + 1 < circuits.size(); ++k) {
        const auto& a = circuits[k];
        const auto& b = circuits[k + 1];
        std::vector<Gate> window(a.begin() + static_cast<std::ptrdiff_t>(rz_pos(a)) + 1, a.end());
        window.insert(window.end(), b.begin(), b.begin() + static_cast<std::ptrdiff_t>(rz_pos(b)));
        const auto before = count_gates(window);
        const auto after = count_gates(cancel_inverses(window));
        total.cnot -= before.cnot - after.cnot;
        total.single_clifford -= before.single_clifford - after.single_clifford;
    }
    return total;
}

GateCount step_circuit_count_global(const hamiltonian::TermList& terms) {
    std::vector<Gate> all;
    for (const auto& s : hamiltonian::trotter_step_strings(terms)) {
        auto c = string_circuit(s);
        all.insert(all.end(), c.begin(), c.end());
    }
    return count_gates(cancel_inverses(all));
}

}  // namespace qre::oracle
