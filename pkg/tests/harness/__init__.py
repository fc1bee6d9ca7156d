from healthmarl.harness import ExperimentConfig


def tiny_config(output_dir, **overrides):
    ''' Two-agent cooperative navigation trained on 8 short episodes. '''
    params = dict(env='coop-nav', n_agents=2, episode_length=5, trials=2,
                  total_episodes=8, episodes_per_batch=4, epochs=1, minibatches=2,
                  policy_hidden=(8,), critic_hidden=(8, 8), checkpoint_interval=1,
                  output_dir=output_dir)
    params.update(overrides)
    return ExperimentConfig(**params)
