"""
Plain-text report formats
"""

# Core imports
from string import Template
import textwrap
from ._version import __version__


class RunSummary:
    text = Template(
        textwrap.dedent(
            f"""\
            ==================================================================
            dialectcxg run summary
            Generated by dialectcxg v{__version__}
            ==================================================================
            Configuration: $config_hash
            Seed: $seed
            Status: $status

            Stages
            $stages

            Artifacts
            $artifacts
            """
        )
    )

    @classmethod
    def render(cls, manifest: dict) -> str:
        """Summary of a run manifest"""

        stages = manifest.get('stages', {})
        stage_rows = '\n'.join(
            f'  {name:<12} {entry["status"]:<8} {entry.get("fingerprint", "")[:12]}'
            for name, entry in stages.items()
        ) or '  (none)'
        artifact_rows = '\n'.join(
            f'  {path}' for entry in stages.values() for path in entry.get('artifacts', [])
        ) or '  (none)'

        return cls.text.substitute(config_hash=manifest['config_hash'], seed=manifest['seed'],
                                   status=manifest['status'], stages=stage_rows,
                                   artifacts=artifact_rows)
