#pragma once

#include <array>
#include <iosfwd>
#include <map>
#include <string>
#include <vector>

namespace qre::hamiltonian {

// Spatial-orbital integrals in chemist notation (pq|rs). Indices are 0-based here;
// the FCIDUMP text format is 1-based and converted on read/write.
class IntegralTable {
public:
    using OneKey = std::array<int, 2>;
    using TwoKey = std::array<int, 4>;

    int n_spatial = 0;
    int n_electrons = 0;
    int ms2 = 0;
    double nuclear_repulsion = 0.0;
    std::string source_label;

    double one_body(int p, int q) const;
    double two_body(int p, int q, int r, int s) const;

    void set_one_body(int p, int q, double value);
    void set_two_body(int p, int q, int r, int s, double value);

    // Canonical-key storage; each entry stands for its whole symmetry orbit.
    const std::map<OneKey, double>& one_body_entries() const { return one_; }
    const std::map<TwoKey, double>& two_body_entries() const { return two_; }

    static OneKey canonical(int p, int q);
    static TwoKey canonical(int p, int q, int r, int s);

    // Flat copies for hot loops: one[p*n+q], two[((p*n+q)*n+r)*n+s].
    std::vector<double> dense_one_body() const;
    std::vector<double> dense_two_body() const;

    // Compares content; source_label is ignored.
    friend bool operator==(const IntegralTable& a, const IntegralTable& b);

private:
    void check_index(int p) const;

    std::map<OneKey, double> one_;
    std::map<TwoKey, double> two_;
};

IntegralTable parse_fcidump(std::istream& in, std::string source_label = {});
IntegralTable read_fcidump(const std::string& path);

// Values written with 17 significant digits so a re-parse is bit-exact.
void write_fcidump(std::ostream& out, const IntegralTable& table);

}  // namespace qre::hamiltonian
