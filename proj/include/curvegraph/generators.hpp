#pragma once

#include <optional>
#include <variant>
#include <vector>

#include "curvegraph/graph.hpp"

namespace curvegraph {

namespace family {

/// Unweighted cycle; vertex i ~ i+1 mod n.
struct Cycle { std::size_t n = 3; };
/// Unweighted complete graph.
struct Complete { std::size_t n = 2; };
/// Unweighted d-cube; vertex ids are bit masks, labels are bit strings.
struct Hypercube { std::size_t d = 1; };
/// Cayley graph of Z_{m1} x ... x Z_{mr}; u ~ u + s for every generator s.
/// The generator list must be closed under negation and generate the group.
struct AbelianCayley {
  std::vector<std::size_t> orders;
  std::vector<std::vector<long>> generators;
};
/// Two copies of K_n joined by one bridge. Vertices 0..n-1 form the first
/// copy with bridge end n-1; n..2n-1 form the second copy with bridge end n.
struct Dumbbell { std::size_t n = 3; };
/// Triangle x,y,z with w_xy = a, w_xz = b, w_yz = c and explicit measure
/// mu(x) = C, mu(y) = B, mu(z) = A (used when the measure mode is Explicit).
struct Triangle { double a = 1, b = 1, c = 1, A = 1, B = 1, C = 1; };
/// Tetrahedron x1..x4 with opposite edges sharing a weight:
/// w(x1x4) = w(x2x3) = a, w(x1x2) = w(x3x4) = b, w(x1x3) = w(x2x4) = c.
/// The Explicit measure mode means the constant A on every vertex.
struct Tetrahedron { double a = 1, b = 1, c = 1, A = 1; };
/// Unweighted path on n vertices.
struct Path { std::size_t n = 2; };
/// K_n x K_2 (row-major: vertex (i, j) has index 2i + j).
struct MimuraProduct { std::size_t n = 2; };

}  // namespace family

using FamilyTag = std::variant<family::Cycle, family::Complete, family::Hypercube,
                               family::AbelianCayley, family::Dumbbell, family::Triangle,
                               family::Tetrahedron, family::Path, family::MimuraProduct>;

struct FamilySpec {
  FamilyTag family;
  MeasureMode measure = MeasureMode::unit();
};

/// Deterministic constructor for every built-in family. Throws
/// Error{InvalidParameter} on out-of-range parameters.
WeightedGraph generate(const FamilySpec& spec);

struct DumbbellWitness {
  VertexFunction f0;
  std::optional<VertexFunction> g0;  // only for n = 3
};

/// Test functions at the bridge vertex y0 = n-1 of Dumbbell{n}:
/// f0 is 0 on the first copy, 1 at y0' = n and 2 on the rest of the second copy;
/// g0 (n = 3 only) is 1 at y0, -1 elsewhere in the first copy, 4 at y0', 7 elsewhere.
DumbbellWitness dumbbell_witness_functions(std::size_t n);

/// Lifts f on g to F on g x g (row-major indexing) with F(u, v) = f(u) + f(v) - f(x).
/// This satisfies F(x,x) = f(x), F(x_i,x) = f(x_i), F(x,x_k) = f(x_k) and the
/// additive rule F(x_i,x_k) = F(x,x_k) + F(x_i,x) - F(x,x), and makes both
/// slices through (x,x) equal to f.
VertexFunction product_tightness_function(const WeightedGraph& g, const VertexFunction& f,
                                          std::size_t x);

}  // namespace curvegraph
