
class RecordError(Exception):
    missing_field = 'Record {index} is missing required field "{field}"'
    bad_register = 'Unknown register "{value}", expected WEB or SOCIAL'
    bad_month = 'Month "{value}" is not in YYYY-MM form'
    bad_coordinates = 'Coordinates ({lat}, {lon}) are outside the valid range'
    empty_text = 'Document {source_id} has no text after whitespace normalization'
    register_fields = 'WEB documents need a domain suffix and no coordinates, ' \
        'SOCIAL documents need coordinates and no domain suffix'


class GrammarParseError(Exception):
    malformed_slot = 'Malformed slot "{slot}"'
    unknown_kind = 'Unknown slot kind "{kind}", expected LEX, SYN, SEM or SYNSEM'
    empty_construction = 'Construction has no slots'

    def __init__(self, message: str, line: int = None):

        self.line = line
        if line is not None:
            message = f'line {line}: {message}'
        super().__init__(message)


class DuplicateConstruction(GrammarParseError):
    repeated = 'Construction "{construction}" already defined on line {first}'


class InsufficientData(Exception):
    below_minimum = 'Region {region} ({register}) has {train} training and ' \
        '{test} testing samples after development, need at least ' \
        '{min_train} and {min_test}'
    too_few_for_dev = 'Region {region} ({register}) has only {n} samples, ' \
        'fewer than the {dev} reserved for development'


class SamplingError(Exception):
    mixed_groups = 'All documents passed to aggregate must share one ' \
        '(region, register) pair, found {groups}'
    bad_plan = 'Split plan caps must be at least the minimums ' \
        '(train {max_train} < {min_train} or test {max_test} < {min_test})'
    mixed_samples = 'assign_splits expects samples from one (region, register) pair'


class EmptyRegion(Exception):
    no_samples = 'Region {region} has no samples'


class DegenerateData(Exception):
    too_few_classes = 'Training data must contain at least two classes, found {n}'
    missing_class = 'Class {label} has no training samples'
    empty_dev = 'Development data is empty'
    mismatched = 'Feature matrix has {rows} rows but {labels} labels were given'
    missing_split = 'No {split} data prepared for register {register}'


class SpaceMismatch(Exception):
    different = 'Vector space {got} does not match model space {expected}'


class EvaluationError(Exception):
    empty = 'Cannot evaluate on an empty test set'
    unknown_labels = 'Test labels {labels} are not classes of the model'


class InvalidProfile(Exception):
    probability = 'Profile {region}: probability {value} for construction ' \
        '{construction} is outside [0, 1]'
    weight = 'Profile {region}: lexicon weight {value} for "{word}" is negative'
    construction = 'Profile {region}: construction {construction} is not in the grammar'
    too_few = 'At least two dialect profiles are required, got {n}'
    count = 'samples_per_region must be at least 1, got {n}'


class FeatureSpaceExhausted(Exception):
    exhausted = 'No unmasked features remain after {removed} removals'


class ConfigError(Exception):
    missing_seed = 'The run configuration must set "seed"'
    unknown_stage = 'Unknown stage "{stage}", expected one of {stages}'
    unknown_space = 'Unknown feature space "{space}"'
    missing_path = 'Configured path {key} = {path} does not exist'
    missing_input = 'Stage {stage} needs input "{key}" but the configuration does not set it'
    not_a_mapping = 'Configuration file {path} does not contain a mapping'
    bad_value = 'Configuration value {key} = {value!r} is invalid: {reason}'


class StageError(Exception):
    missing_artifact = 'Stage {stage} needs {path}, run the {needs} stage first'

    def __init__(self, stage: str, message: str):

        self.stage = stage
        super().__init__(f'[{stage}] {message}')
