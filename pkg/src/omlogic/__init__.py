"""Finite truth-value algebras, orthomodular lattices, and first-order semantics over them."""

from .poset import Poset, mk_poset, meet, join, top, bottom, is_continuous
from .tvalgebra import (AlgType, TVAlgebra, AlgebraMap, OML_TYPE, mk_algebra, product,
                        power, trivial, projection, is_homomorphism, is_isomorphism,
                        find_isomorphism, is_irreducible_bruteforce)
from .oml import (check_oml, check_boolean, center, compatible, is_irreducible_oml,
                  decompose, factor_by_central, enumerate_omls, enumerate_ortholattices,
                  two, one, boolean_algebra, mo, benzene, oml_view)
from .syntax import Language, parse_wff, print_wff, random_wff
from .semantics import (Interpretation, Structure, eval_sentence, eval_wff, holds,
                        is_model, factor_structures, is_irreducible_structure)
from .deduction import DeductionSystem, Rule, Proof, match_pattern, check_proof
from .harness import (FiniteSemantics, check_factor_closed, saturate, verify_main_theorem,
                      irreducible_models)

__version__ = "0.1.0"
