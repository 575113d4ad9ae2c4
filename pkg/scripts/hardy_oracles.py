"""Compare the Jensen and root-location outer tests; recover point evaluations."""

import json

from stabil.experiments import HardyConfig, config_from_args, config_parser, run_hardy


def main():
    args = config_parser(HardyConfig, __doc__).parse_args()
    print(json.dumps(run_hardy(config_from_args(HardyConfig, args)), indent=2))


if __name__ == "__main__":
    main()
