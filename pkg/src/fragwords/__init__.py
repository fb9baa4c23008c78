"""Fragile words, the eraser morphism, free inverse monoids and Stephen closure."""

from .words import Alphabet, Word, WordSyntaxError, free_reduce, delete_letter, is_dyck, parse_word
from .freegroup import EraserTuple, eraser_image, in_image, is_fragile, nested_commutator, preimage
from .automata import InvAutomaton, fold, munn_tree, isomorphic, product, contract, lift_path, to_dot
from .stephen import UNKNOWN, Budget, Presentation, closure, word_problem, natural_order
from .fim import FimElement, fim_equal, factors, factor_automaton, rational_membership, covering_idempotents
from .eraser import InvEraserTuple, eraser_image_inv, image_membership_fim, image_membership_presented, witness, in_kernel_K
from .transducers import Transducer, act, restrict, extend_with_sink, is_relation_bounded

__version__ = "0.1.0"
