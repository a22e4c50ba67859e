def execute_command(image):
    image_patch = ImagePatch(image)
    chairs = image_patch.find('chair')
    black_chairs = [c for c in chairs if c.verify_property('chair', 'black')]
    if len(black_chairs) == 0:
        return {'function': 'None', 'error': 'No black chair found.'}
    black_chair = black_chairs[0]
    backpacks = image_patch.find('backpack')
    if len(backpacks) == 0:
        return {'function': 'None', 'error': 'No backpack found.'}
    backpacks.sort(key=lambda b: distance(b, black_chair))
    backpack = backpacks[0]
    return {'function': 'navigate_to_object', 'inputs': (backpack.horizontal_center, backpack.vertical_center), 'box': [backpack.left, backpack.lower, backpack.right, backpack.upper]}
