def execute_command(image):
    image_patch = ImagePatch(image)
    cans = image_patch.find('trash can')
    backpacks = image_patch.find('backpack')
    if len(cans) == 0 or len(backpacks) == 0:
        return {'function': 'None', 'error': 'Missing trash can or backpack.'}
    backpacks.sort(key=lambda b: distance(b, cans[0]))
    backpack = backpacks[0]
    return {'function': 'navigate_to_object', 'inputs': (backpack.horizontal_center, backpack.vertical_center), 'box': [backpack.left, backpack.lower, backpack.right, backpack.upper]}
