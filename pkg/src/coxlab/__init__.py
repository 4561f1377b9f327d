"""Exact computations for Coxeter groups and their reflection representations."""
from .scalar import AlgScalar, QuadExt, InvalidLabel, expression, sign, to_float, two_cos_pi_over
from .diagram import (INF, CoxeterDiagram, DiagramError, DiagramSyntaxError, cosine_matrix,
                      is_isomorphic, lambda_cosine_matrix, parse, serialize, to_dot)
from .exactla import Matrix, Signature, SymMatrix, det_sign, determinant, inertia
from .classify import (CartanKind, Kind, cartan_type, check_H0, check_Hminus,
                       classify_irreducible, moussong, subset_class)
from .nerve import SimplicialComplex, join_sphere_certificate, nerve
from .tits import TitsRepresentation, build as tits_representation, verify_relations
from .catalog import catalog_get, catalog_list
from .certify import (Certificate, LambdaQuadratic, RegionVerdict, certify_ghc,
                      certify_quasi_fuchsian, discriminant_identity, disconnected_check,
                      lambda_polynomial, region_scan, sweep_family, vinberg_single_edge_identity,
                      vinberg_two_edge_identity)

__version__ = "0.1.0"
