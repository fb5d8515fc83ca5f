import hypothesis

hypothesis.settings.register_profile(
    "qmod",
    max_examples=60,
    deadline=None,
)
hypothesis.settings.load_profile("qmod")
