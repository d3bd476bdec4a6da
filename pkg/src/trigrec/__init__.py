"""Sampling recovery, trigonometric kernels, and sparse kernel
approximation on the torus, at desk scale."""

__version__ = "0.1.0"

from .polys import (INF, BivariateTrigPoly, GridFunction, TrigPoly, convolve,
                    dual_exponent, from_samples, mixed_norm, norm, norm2, norm_biv,
                    to_samples)
from .kernels import (KernelSpec, a_block, a_block_kernel, bernoulli,
                      bernoulli_tail_bound, dirichlet, fejer, gen_bernoulli,
                      inverse_power_kernel, make_kernel, parse_kernel_spec,
                      shift_kernel, vallee_poussin)
from .operators import (MultiplierParams, RecoveryPlan, SmolyakResult, apply_plan,
                        interpolate_In, multiplier, multiplier_biv,
                        plan_interpolation, plan_vdlp, recover_Rn,
                        smolyak_sample_count, smolyak_Tn)
from .smoothness import (KernelClass, SmoothnessParams, class_source,
                         extremal_kernel, format_class_spec, h_check,
                         parse_class_spec, w_member, wk_member, worst_case_error)
from .sparse import (DiscretizedKernel, SparseApproximant, cross_kk,
                     cubature_error_for_knots, cubature_optimize, greedy_lk,
                     lk_plan, svd_bilinear)
from .rates import (LAW_IDS, RateLaw, RateReport, predicted_exponent, rate_fit,
                    r_floor_q, r_floor_qp, xi)
from .experiments import (ENGINES, IDENTITY_IDS, FoolingBound, VerifyInstance,
                          VerifyReport, fooling_bound, parse_config,
                          run_experiment, verify_identity)
