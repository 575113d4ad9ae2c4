"""Classify constructed product-composition operators and report recovery errors."""

import json

from stabil.experiments import RoundTripConfig, config_from_args, config_parser, run_round_trip


def main():
    args = config_parser(RoundTripConfig, __doc__).parse_args()
    print(json.dumps(run_round_trip(config_from_args(RoundTripConfig, args)), indent=2))


if __name__ == "__main__":
    main()
