#!/usr/bin/env python3
"""Regenerate the bundled FCIDUMP molecules and their reference values.

Requires pyscf. Not needed for building or testing; the outputs are
checked in under data/molecules/.
"""
import json
import pathlib

from pyscf import fci, gto, scf
from pyscf.tools import fcidump

OUT = pathlib.Path(__file__).resolve().parent.parent / "data" / "molecules"

MOLECULES = {
    "h2_sto3g": ("H 0 0 0; H 0 0 0.7414", "sto-3g", 0),
    "h2_sto3g_stretched": ("H 0 0 0; H 0 0 2.9656", "sto-3g", 0),
    "heh_plus_sto3g": ("He 0 0 0; H 0 0 0.7743", "sto-3g", 1),
    "h4_chain_sto3g": ("H 0 0 0; H 0 0 0.9; H 0 0 1.8; H 0 0 2.7", "sto-3g", 0),
    "lih_sto3g": ("Li 0 0 0; H 0 0 1.5949", "sto-3g", 0),
    "h2o_sto3g": ("O 0 0 0.1173; H 0 0.7572 -0.4692; H 0 -0.7572 -0.4692", "sto-3g", 0),
}


def main():
    refs = {}
    for name, (atom, basis, charge) in MOLECULES.items():
        mol = gto.M(atom=atom, basis=basis, charge=charge, spin=0, verbose=0)
        mf = scf.RHF(mol).run()
        path = OUT / f"{name}.fcidump"
        fcidump.from_scf(mf, str(path), tol=1e-14)
        cis = fci.FCI(mf)
        e_fci, civec = cis.kernel()
        refs[name] = {
            "file": path.name,
            "atom": atom,
            "basis": basis,
            "charge": charge,
            "n_spatial": int(mol.nao),
            "n_electrons": int(mol.nelectron),
            "e_hf": float(mf.e_tot),
            "e_fci": float(e_fci),
            "hf_overlap": float(civec[0, 0] ** 2),
            "equilibrium": not name.endswith("stretched"),
        }
    (OUT / "references.json").write_text(json.dumps(refs, indent=2) + "\n")


if __name__ == "__main__":
    main()
