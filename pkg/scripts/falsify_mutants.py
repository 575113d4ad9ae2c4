"""Count random draws needed to refute mutated disk operators."""

import json

from stabil.experiments import FalsifyConfig, config_from_args, config_parser, run_falsify


def main():
    args = config_parser(FalsifyConfig, __doc__).parse_args()
    print(json.dumps(run_falsify(config_from_args(FalsifyConfig, args)), indent=2))


if __name__ == "__main__":
    main()
