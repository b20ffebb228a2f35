// JSON documents for regions and lattices.
//
// Region:
//   {"d": 2,
//    "real": {"kind": "box", "lo": [..], "hi": [..]}
//          | {"kind": "ball", "center": [..], "radius": r, "norm": "euclidean" | "sup"}
//          | {"kind": "shell", "r_in": a, "r_out": b}
//          | {"kind": "psi", "psi": {"kind": "power" | "zero_beyond_one", "exponent": e}, "T": t},
//    "finite": {"2": {"kind": "ball", "k": 0} | {"kind": "shell", "k": 0}
//                  | {"kind": "coset", "v0": [..], "k": 1} | {"kind": "psi", "psi": {..}, "t": 3}}}
// "center" defaults to the origin, "k" to 0. Primes absent from "finite" carry Z_p^d.
//
// Lattice:
//   {"d": 2, "primes": [2], "precision": [24],
//    "real": [row-major doubles], "real_exact": ["1", "1/2", ..] (optional),
//    "finite": [{"p": 2, "prec": 24, "shift": 0, "H": [..], "inv_shift": 0, "Hinv": [..]}],
//    "cone": {"real": v, "finite": [{"p": 2, "val": 0, "unit": u, "prec": 24}]} (optional)}
#pragma once

#include <string>

#include "sarith/slattice.hpp"

namespace sarith {

std::string region_to_json(const ProductRegion& A);
ProductRegion region_from_json(const std::string& text);  // MalformedRegion on bad documents

std::string lattice_to_json(const SLattice& L);
SLattice lattice_from_json(const std::string& text);  // InvalidArgument on bad documents

}  // namespace sarith
