"""Check that conforming product-composition operators never destroy stability."""

import json

from stabil.experiments import SufficiencyConfig, config_from_args, config_parser, run_sufficiency


def main():
    args = config_parser(SufficiencyConfig, __doc__).parse_args()
    print(json.dumps(run_sufficiency(config_from_args(SufficiencyConfig, args)), indent=2))


if __name__ == "__main__":
    main()
