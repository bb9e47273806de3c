"""Bundled data for ridley: the default campaign, published reference numbers and a smoke-test campaign."""
