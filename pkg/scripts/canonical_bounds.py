"""Measure canonical-product coefficients against their factorial bound."""

import json

from stabil.experiments import CanonicalConfig, config_from_args, config_parser, run_canonical


def main():
    args = config_parser(CanonicalConfig, __doc__).parse_args()
    print(json.dumps(run_canonical(config_from_args(CanonicalConfig, args)), indent=2))


if __name__ == "__main__":
    main()
