from jwa.core import (jwa_trace,
                      jwa_reduce,
                      iteration_count,
                      kary_step,
                      verify_output,
                      isqrt,
                      isqrt_ceil,
                      mod_inverse,
                      mod_div,
                      JwaInput,
                      JwaTrace,
                      TraceStep,
                      ReducedPair,
                      KaryStep,
                      JWAError,
                      InvalidInput,
                      DivisionByZero,
                      NotInvertible,
                      Overflow,
                      TooLarge,
                      Inconsistent,
                      NoInverse)

from jwa.fib import (fib,
                     m_of_k,
                     log_phi_bounds,
                     QuotientPattern,
                     single_two_pattern,
                     IntervalSpec,
                     interval_I,
                     members_J,
                     iter_members_J,
                     cf_expansion,
                     convergents,
                     ones_prefix_len,
                     d_sequence,
                     dm_closed_form,
                     lemma2_thresholds)

from jwa.worst import (brute_force_N,
                       analytic_N,
                       worst_case_row,
                       worst_case_cs,
                       table_rows,
                       sigma_solutions,
                       pattern_solutions,
                       iter_patterns,
                       unwind_remainders,
                       recover_c,
                       scan_lower_bound,
                       even_powers_of_two,
                       SigmaCandidate,
                       TableRow,
                       ScanReport,
                       FallbackUsed,
                       MethodMismatch)

from jwa._version import __version__
