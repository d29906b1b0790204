# scripts/generate_corpus.py

import logging
import argparse

from ingestion.corpus import save_corpus
from simulator.corpus_generator import DEFAULT_TAGS, DEFAULT_TERMS, CorpusSimulator

LOG_FORMAT = "%(asctime)s | %(levelname)s | %(message)s"
logging.basicConfig(level=logging.INFO, format=LOG_FORMAT)
logger = logging.getLogger("corpus-generator")


def parse_args(argv=None):
    parser = argparse.ArgumentParser(
        description="Write a seeded synthetic social-media corpus (JSON Lines)"
    )
    parser.add_argument(
        "--out",
        default="data/corpus/synthetic.jsonl",
        help="Corpus file to write",
    )
    parser.add_argument(
        "--count",
        type=int,
        default=500,
        help="Number of posts",
    )
    parser.add_argument(
        "--seed",
        type=int,
        default=42,
        help="Random seed",
    )
    parser.add_argument(
        "--terms",
        nargs="+",
        default=list(DEFAULT_TERMS),
        help="Application terms mentioned in the posts",
    )
    parser.add_argument(
        "--tags",
        nargs="+",
        default=list(DEFAULT_TAGS),
        help="Attack hashtags sprinkled over the posts",
    )
    return parser.parse_args(argv)


def main(argv=None):
    args = parse_args(argv)

    simulator = CorpusSimulator(terms=args.terms, tags=args.tags, seed=args.seed)
    posts = simulator.generate(args.count)
    save_corpus(posts, args.out)

    logger.info(f"Wrote {len(posts)} posts to {args.out} (seed {args.seed})")


if __name__ == "__main__":
    main()
