class NonConvergenceWarning(UserWarning):
    max_iter = 'Linear solver did not converge for C={C} within {max_iter} ' \
        'iterations, keeping the last iterate'


class UnmaskingWarning(UserWarning):
    exhausted = 'Feature space exhausted after round {round}, curve truncated'


class RecordWarning(UserWarning):
    skipped = 'Skipping record {index}: {reason}'


class ProfileWarning(UserWarning):
    overflow = 'Profile {region}: construction instances need {needed} words, ' \
        'more than the sample size {size}, dropping the excess'
