from .logit import (logit, class_scores, nlc, class_probabilities,
                    conditional_probabilities, ScoreVector, as_temps)
from .entropy import (nested_entropy, class_nested_entropy, restricted_entropy,
                      conditional_entropy, entropy_gradient, mirror_scores,
                      regularized_objective, regularized_argmax,
                      RegularizedChoice)
from .learning import score_field, new_field, new_integrate, nrl_integrate
