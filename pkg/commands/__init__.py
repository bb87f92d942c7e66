"""Subcommands of the amplituhedron CLI; each module exposes register(subparsers) and run(args, cfg)"""

from commands import classify_cmd, config_cmd, figure_cmd, member_cmd, verify_cmd

COMMANDS = (classify_cmd, member_cmd, verify_cmd, figure_cmd, config_cmd)
