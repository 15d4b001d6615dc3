from setuptools import setup, find_packages

setup(
	name='qtasep',
	version='0.1.0',
	install_requires=["appdirs>=1.4.4", "numpy", "scipy>=1.9", "numba>=0.57", "tqdm"],
	extras_require={'test': ["pytest"]},
	packages=find_packages(include=['qtasep', 'qtasep.*']),
	entry_points={'console_scripts': ['qtasep = qtasep.cli:main']},
)
