def execute_command(image):
    image_patch = ImagePatch(image)
    trees = image_patch.find('tree')
    backpacks = image_patch.find('backpack')
    if len(trees) == 0 or len(backpacks) == 0:
        return {'function': 'None', 'error': 'Missing tree or backpack.'}
    backpacks.sort(key=lambda b: distance(b, trees[0]))
    backpack = backpacks[0]
    return {'function': 'navigate_to_object', 'inputs': (backpack.horizontal_center, backpack.vertical_center), 'box': [backpack.left, backpack.lower, backpack.right, backpack.upper]}
